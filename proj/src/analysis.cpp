#include "blo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <thread>

#include <json.hpp>

#include "blo/attack.hpp"
#include "blo/errors.hpp"
#include "blo/matcher.hpp"

namespace blo::analysis {

namespace {

// Splits [0, total) into contiguous chunks run on worker threads. Each chunk
// writes only into its own slot of the result vector, and callers reduce the
// slots in chunk order.
template <typename Result, typename Fn>
std::vector<Result> parallel_chunks(std::uint64_t total, Fn&& fn) {
  const std::uint64_t hw = std::max(1U, std::thread::hardware_concurrency());
  const std::uint64_t chunks = std::clamp<std::uint64_t>(total / 4096, 1, std::min<std::uint64_t>(hw, 16));
  std::vector<Result> results(chunks);
  std::vector<std::thread> workers;
  workers.reserve(chunks);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    const std::uint64_t begin = total * c / chunks;
    const std::uint64_t end = total * (c + 1) / chunks;
    workers.emplace_back([&, c, begin, end] { results[c] = fn(begin, end); });
  }
  for (auto& w : workers) w.join();
  return results;
}

std::int64_t as_int(std::uint64_t v) { return static_cast<std::int64_t>(v); }

void require_divisible(std::size_t bit_length, std::size_t block_size) {
  if (bit_length < block_size || bit_length % block_size != 0) {
    throw InvalidArgument("block size " + std::to_string(block_size) + " must divide bit length " +
                          std::to_string(bit_length));
  }
}

}  // namespace

std::string_view to_string(ReportKind kind) noexcept {
  switch (kind) {
    case ReportKind::kCensus:
      return "census";
    case ReportKind::kRecovery:
      return "recovery";
    case ReportKind::kLinkability:
      return "linkability";
    case ReportKind::kRevocability:
      return "revocability";
  }
  return "unknown";
}

std::string format_value(const ReportValue& v) {
  struct Visitor {
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.9g", d);
      return buf;
    }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, v);
}

void AnalysisReport::set_parameter(std::string name, ReportValue value) {
  parameters_.emplace_back(std::move(name), std::move(value));
}

void AnalysisReport::set_finding(std::string name, ReportValue value) {
  for (auto& [k, v] : findings_) {
    if (k == name) {
      v = std::move(value);
      return;
    }
  }
  findings_.emplace_back(std::move(name), std::move(value));
}

void AnalysisReport::set_verdict(std::string_view pattern) {
  std::string text;
  std::vector<std::string> refs;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] != '{') {
      text += pattern[i];
      continue;
    }
    const std::size_t close = pattern.find('}', i);
    if (close == std::string_view::npos) throw InvalidArgument("verdict: unterminated '{'");
    std::string name(pattern.substr(i + 1, close - i - 1));
    text += format_value(finding(name));
    refs.push_back(std::move(name));
    i = close;
  }
  verdict_ = std::move(text);
  verdict_refs_ = std::move(refs);
}

const ReportValue& AnalysisReport::finding(std::string_view name) const {
  for (const auto& [k, v] : findings_) {
    if (k == name) return v;
  }
  throw InvalidArgument("report has no finding '" + std::string(name) + "'");
}

std::int64_t AnalysisReport::finding_int(std::string_view name) const { return std::get<std::int64_t>(finding(name)); }

double AnalysisReport::finding_real(std::string_view name) const {
  const auto& v = finding(name);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

bool AnalysisReport::finding_bool(std::string_view name) const { return std::get<bool>(finding(name)); }

std::string AnalysisReport::to_tsv() const {
  std::string out = "kind\t" + std::string(to_string(kind_)) + "\n";
  for (const auto& [k, v] : parameters_) out += "param." + k + "\t" + format_value(v) + "\n";
  for (const auto& [k, v] : findings_) out += "finding." + k + "\t" + format_value(v) + "\n";
  out += "verdict\t" + verdict_ + "\n";
  return out;
}

std::string AnalysisReport::to_json() const {
  auto to_json_value = [](const ReportValue& v) {
    return std::visit([](const auto& x) { return nlohmann::ordered_json(x); }, v);
  };
  nlohmann::ordered_json doc;
  doc["kind"] = to_string(kind_);
  doc["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : parameters_) doc["parameters"][k] = to_json_value(v);
  doc["findings"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : findings_) doc["findings"][k] = to_json_value(v);
  doc["verdict"] = verdict_;
  return doc.dump(2) + "\n";
}

AnalysisReport fiber_census(std::size_t bit_length, std::size_t block_size) {
  if (bit_length > kMaxCensusBits) {
    throw CapacityError("census over " + std::to_string(bit_length) + " bits exceeds the exhaustive bound of " +
                        std::to_string(kMaxCensusBits) + " bits");
  }
  const TransformParams params(block_size);
  require_divisible(bit_length, block_size);

  const std::size_t n = bit_length / block_size;
  const std::size_t out_bits = bit_length - n;
  const std::uint64_t inputs = std::uint64_t{1} << bit_length;

  using Histogram = std::vector<std::uint32_t>;
  const auto partials = parallel_chunks<Histogram>(inputs, [&](std::uint64_t begin, std::uint64_t end) {
    Histogram h(std::size_t{1} << out_bits, 0);
    for (std::uint64_t x = begin; x < end; ++x) {
      const auto tpl = transform(FeatureVector(BitString::from_uint(x, bit_length)), params);
      ++h[tpl.data().to_uint()];
    }
    return h;
  });
  Histogram fibers(std::size_t{1} << out_bits, 0);
  for (const auto& h : partials) {
    for (std::size_t i = 0; i < h.size(); ++i) fibers[i] += h[i];
  }

  std::uint64_t distinct = 0;
  std::uint32_t min_size = UINT32_MAX;
  std::uint32_t max_size = 0;
  for (std::uint32_t s : fibers) {
    if (s == 0) continue;
    ++distinct;
    min_size = std::min(min_size, s);
    max_size = std::max(max_size, s);
  }
  const bool uniform = min_size == max_size;

  AnalysisReport r(ReportKind::kCensus);
  r.set_parameter("bit_length", as_int(bit_length));
  r.set_parameter("block_size", as_int(block_size));
  r.set_finding("block_count", as_int(n));
  r.set_finding("inputs", as_int(inputs));
  r.set_finding("distinct_templates", as_int(distinct));
  r.set_finding("expected_distinct_templates", as_int(std::uint64_t{1} << out_bits));
  r.set_finding("fiber_size_min", as_int(min_size));
  r.set_finding("fiber_size_max", as_int(max_size));
  r.set_finding("fiber_uniform", uniform);
  r.set_finding("expected_fiber_size", as_int(std::uint64_t{1} << n));
  r.set_finding("impostors_per_template", as_int(std::uint64_t{min_size} - 1));
  r.set_verdict(
      "all {inputs} inputs map onto {distinct_templates} templates; every template is produced by "
      "{fiber_size_min} to {fiber_size_max} inputs, so {impostors_per_template} non-owner inputs match each "
      "enrolled template");
  return r;
}

AnalysisReport recovery_probability(std::size_t bit_length, std::size_t block_size, std::uint64_t trials,
                                    std::uint64_t seed) {
  const TransformParams params(block_size);
  require_divisible(bit_length, block_size);
  if (trials == 0) throw InvalidArgument("recovery_probability: trials must be positive");
  const std::size_t n = bit_length / block_size;

  const auto partials = parallel_chunks<std::uint64_t>(trials, [&](std::uint64_t begin, std::uint64_t end) {
    std::uint64_t hits = 0;
    for (std::uint64_t t = begin; t < end; ++t) {
      const FeatureVector original(random_bits(bit_length, seed, 2 * t));
      const auto tpl = transform(original, params);
      const auto forged = forge(tpl, Selector::random(n, seed, 2 * t + 1));
      if (forged.data == original.data) ++hits;
    }
    return hits;
  });
  std::uint64_t successes = 0;
  for (auto h : partials) successes += h;

  const double analytic = std::ldexp(1.0, -static_cast<int>(n));
  const double empirical = static_cast<double>(successes) / static_cast<double>(trials);
  const double std_error = std::sqrt(analytic * (1.0 - analytic) / static_cast<double>(trials));
  const double tolerance = 3.0 * std_error;

  AnalysisReport r(ReportKind::kRecovery);
  r.set_parameter("bit_length", as_int(bit_length));
  r.set_parameter("block_size", as_int(block_size));
  r.set_parameter("trials", as_int(trials));
  r.set_parameter("seed", std::to_string(seed));
  r.set_finding("block_count", as_int(n));
  r.set_finding("successes", as_int(successes));
  r.set_finding("empirical_rate", empirical);
  r.set_finding("analytic_rate", analytic);
  r.set_finding("std_error", std_error);
  r.set_finding("tolerance_3se", tolerance);
  r.set_finding("within_3se", std::fabs(empirical - analytic) <= tolerance);
  r.set_verdict(
      "a random pre-image equals the original in {empirical_rate} of trials (analytic {analytic_rate}, "
      "within 3 standard errors: {within_3se})");
  return r;
}

AnalysisReport linkability_study(const LinkabilityConfig& config) {
  if (config.users < 2 || config.devices < 2) {
    throw InvalidArgument("linkability study needs at least 2 users and 2 devices");
  }
  if (config.feature_bits == 0) throw InvalidArgument("linkability study: feature_bits must be positive");
  std::vector<FeatureVector> users;
  users.reserve(config.users);
  for (std::size_t u = 0; u < config.users; ++u) {
    users.emplace_back(random_bits(config.feature_bits, config.seed, u), "user" + std::to_string(u));
  }
  return linkability_study(users, config);
}

AnalysisReport linkability_study(std::span<const FeatureVector> users, const LinkabilityConfig& config) {
  const std::size_t user_count = users.size();
  const std::size_t devices = config.devices;
  if (user_count < 2 || devices < 2) {
    throw InvalidArgument("linkability study needs at least 2 users and 2 devices");
  }

  // enrolled[d][u]: every device runs the same keyless transform.
  std::vector<std::vector<ProtectedTemplate>> enrolled(devices);
  for (std::size_t d = 0; d < devices; ++d) {
    for (const auto& fv : users) enrolled[d].push_back(transform(fv, config.params));
  }
  const std::size_t tpl_bits = enrolled[0][0].data().size();
  for (const auto& tpl : enrolled[0]) {
    if (tpl.data().size() != tpl_bits) throw InvalidArgument("linkability study: users differ in feature length");
  }

  struct Rates {
    double link = 0.0;
    double collision = 0.0;
    std::uint64_t same_pairs = 0;
    std::uint64_t cross_pairs = 0;
  };
  auto rates_of = [&](const std::vector<std::vector<ProtectedTemplate>>& db) {
    Rates r;
    std::uint64_t linked = 0;
    std::uint64_t collided = 0;
    for (std::size_t u = 0; u < user_count; ++u) {
      for (std::size_t d1 = 0; d1 < devices; ++d1) {
        for (std::size_t d2 = d1 + 1; d2 < devices; ++d2) {
          ++r.same_pairs;
          if (match_templates(db[d1][u], db[d2][u]).accepted) ++linked;
        }
      }
    }
    for (std::size_t u1 = 0; u1 < user_count; ++u1) {
      for (std::size_t u2 = u1 + 1; u2 < user_count; ++u2) {
        for (std::size_t d1 = 0; d1 < devices; ++d1) {
          for (std::size_t d2 = 0; d2 < devices; ++d2) {
            ++r.cross_pairs;
            if (match_templates(db[d1][u1], db[d2][u2]).accepted) ++collided;
          }
        }
      }
    }
    r.link = static_cast<double>(linked) / static_cast<double>(r.same_pairs);
    r.collision = static_cast<double>(collided) / static_cast<double>(r.cross_pairs);
    return r;
  };

  const Rates blo_rates = rates_of(enrolled);

  AnalysisReport r(ReportKind::kLinkability);
  r.set_parameter("users", as_int(user_count));
  r.set_parameter("devices", as_int(devices));
  r.set_parameter("block_size", as_int(config.params.block_size));
  r.set_parameter("padding", std::string(to_string(config.params.padding)));
  r.set_parameter("feature_bits", as_int(users[0].size()));
  r.set_parameter("seed", std::to_string(config.seed));
  r.set_parameter("keyed_baseline", config.keyed_baseline);
  r.set_finding("template_bits", as_int(tpl_bits));
  r.set_finding("same_user_pairs", as_int(blo_rates.same_pairs));
  r.set_finding("cross_user_pairs", as_int(blo_rates.cross_pairs));
  r.set_finding("blo_link_rate", blo_rates.link);
  r.set_finding("blo_cross_user_collision_rate", blo_rates.collision);

  if (!config.keyed_baseline) {
    r.set_verdict(
        "identical templates on every device: {blo_link_rate} of same-user cross-device pairs link "
        "(cross-user collisions {blo_cross_user_collision_rate})");
    return r;
  }

  // Baseline: device d XORs a secret mask from stream 2^32 + d onto every template.
  auto masked = enrolled;
  for (std::size_t d = 0; d < devices; ++d) {
    const BitString mask = random_bits(tpl_bits, config.seed, (std::uint64_t{1} << 32) + d);
    for (auto& tpl : masked[d]) tpl = ProtectedTemplate(tpl.data() ^ mask, tpl.params(), tpl.original_length());
  }
  const Rates keyed_rates = rates_of(masked);
  r.set_finding("keyed_link_rate", keyed_rates.link);
  r.set_finding("keyed_cross_user_collision_rate", keyed_rates.collision);
  r.set_finding("keyed_baseline_origin", std::string("contrast baseline, not part of the BLO scheme"));
  r.set_verdict(
      "identical templates on every device: {blo_link_rate} of same-user cross-device pairs link; a per-device "
      "XOR mask ({keyed_baseline_origin}) drops this to {keyed_link_rate}");
  return r;
}

std::size_t count_distinct_templates(std::span<const FeatureVector> inputs, const TransformParams& params) {
  std::set<BitString> seen;
  for (const auto& fv : inputs) seen.insert(transform(fv, params).data());
  return seen.size();
}

AnalysisReport revocability_check(const FeatureVector& fv, const TransformParams& params, std::size_t attempts) {
  if (attempts < 2) throw InvalidArgument("revocability check needs at least 2 attempts");
  std::set<BitString> seen;
  for (std::size_t i = 0; i < attempts; ++i) seen.insert(transform(fv, params).data());

  AnalysisReport r(ReportKind::kRevocability);
  r.set_parameter("feature_bits", as_int(fv.size()));
  r.set_parameter("block_size", as_int(params.block_size));
  r.set_parameter("padding", std::string(to_string(params.padding)));
  r.set_parameter("attempts", as_int(attempts));
  r.set_finding("attempts", as_int(attempts));
  r.set_finding("distinct_templates", as_int(seen.size()));
  r.set_finding("revocable", seen.size() > 1);
  r.set_verdict(
      "{attempts} re-enrollments produced {distinct_templates} distinct template(s); revocable: {revocable}. "
      "The transform is deterministic and keyless, its only input is the biometric feature itself");
  return r;
}

}  // namespace blo::analysis
