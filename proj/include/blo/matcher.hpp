#pragma once

#include <cstddef>

#include "blo/transform.hpp"

namespace blo {

// Exact-match threshold; the strictest matcher.
inline constexpr double kDefaultMatchThreshold = 1.0;

struct MatchDecision {
  double similarity = 0.0;
  double threshold = kDefaultMatchThreshold;
  bool accepted = false;
  std::size_t distance = 0;  // differing bits
  std::size_t length = 0;    // compared bits
};

// Normalized Hamming similarity 1 - d/len, accepted iff similarity >= threshold.
// Throws IncomparableTemplates if parameters or data lengths differ and
// InvalidArgument if threshold is outside [0, 1].
[[nodiscard]] MatchDecision match_templates(const ProtectedTemplate& a, const ProtectedTemplate& b,
                                            double threshold = kDefaultMatchThreshold);

}  // namespace blo
