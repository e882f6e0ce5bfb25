#include "blo/matcher.hpp"

#include <string>

#include "blo/errors.hpp"

namespace blo {

MatchDecision match_templates(const ProtectedTemplate& a, const ProtectedTemplate& b, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InvalidArgument("match threshold must lie in [0, 1], got " + std::to_string(threshold));
  }
  if (a.params() != b.params()) {
    throw IncomparableTemplates("templates use different transform parameters");
  }
  if (a.data().size() != b.data().size()) {
    throw IncomparableTemplates("template lengths differ: " + std::to_string(a.data().size()) + " vs " +
                                std::to_string(b.data().size()));
  }
  MatchDecision d;
  d.threshold = threshold;
  d.length = a.data().size();
  d.distance = hamming_distance(a.data(), b.data());
  d.similarity = d.distance == 0 ? 1.0 : 1.0 - static_cast<double>(d.distance) / static_cast<double>(d.length);
  d.accepted = d.similarity >= threshold;
  return d;
}

}  // namespace blo
