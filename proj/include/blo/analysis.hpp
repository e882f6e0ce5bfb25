#pragma once

// Executable security studies of the BLO transform: fiber census, recovery of
// the original, cross-device linkability and revocability.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "blo/bitstring.hpp"
#include "blo/transform.hpp"

namespace blo::analysis {

enum class ReportKind { kCensus, kRecovery, kLinkability, kRevocability };

[[nodiscard]] std::string_view to_string(ReportKind kind) noexcept;

using ReportValue = std::variant<std::int64_t, double, bool, std::string>;

[[nodiscard]] std::string format_value(const ReportValue& v);

class AnalysisReport {
 public:
  using Entries = std::vector<std::pair<std::string, ReportValue>>;

  explicit AnalysisReport(ReportKind kind) : kind_(kind) {}

  void set_parameter(std::string name, ReportValue value);
  void set_finding(std::string name, ReportValue value);

  // `pattern` may reference findings as {name}; each is replaced by the
  // formatted finding. Throws InvalidArgument for a name that is not a finding.
  void set_verdict(std::string_view pattern);

  [[nodiscard]] ReportKind kind() const noexcept { return kind_; }
  [[nodiscard]] const Entries& parameters() const noexcept { return parameters_; }
  [[nodiscard]] const Entries& findings() const noexcept { return findings_; }
  [[nodiscard]] const std::string& verdict() const noexcept { return verdict_; }
  [[nodiscard]] const std::vector<std::string>& verdict_references() const noexcept { return verdict_refs_; }

  // Throws InvalidArgument if absent.
  [[nodiscard]] const ReportValue& finding(std::string_view name) const;
  [[nodiscard]] std::int64_t finding_int(std::string_view name) const;
  [[nodiscard]] double finding_real(std::string_view name) const;
  [[nodiscard]] bool finding_bool(std::string_view name) const;

  // "key<TAB>value" lines: kind, param.*, finding.*, verdict.
  [[nodiscard]] std::string to_tsv() const;
  // Same keys as a JSON object: kind, parameters{}, findings{}, verdict.
  [[nodiscard]] std::string to_json() const;

 private:
  ReportKind kind_;
  Entries parameters_;
  Entries findings_;
  std::string verdict_;
  std::vector<std::string> verdict_refs_;
};

// Largest bit length fiber_census will enumerate exhaustively.
inline constexpr std::size_t kMaxCensusBits = 24;

// Exhaustive over all 2^bit_length inputs. Throws CapacityError above
// kMaxCensusBits and InvalidArgument unless block_size (odd >= 3) divides bit_length.
[[nodiscard]] AnalysisReport fiber_census(std::size_t bit_length, std::size_t block_size);

// Monte Carlo: random feature, transform, forge with a random selector, count
// exact recoveries of the original. Trial t draws its feature from stream 2t and
// its selector from stream 2t+1 of `seed`, so results do not depend on threading.
[[nodiscard]] AnalysisReport recovery_probability(std::size_t bit_length, std::size_t block_size,
                                                  std::uint64_t trials, std::uint64_t seed);

struct LinkabilityConfig {
  std::size_t users = 10;
  std::size_t devices = 5;
  TransformParams params{};
  std::uint64_t seed = 0;
  bool keyed_baseline = false;
  std::size_t feature_bits = 1795;
};

// Synthetic users: user u's feature is random_bits(feature_bits, seed, u).
[[nodiscard]] AnalysisReport linkability_study(const LinkabilityConfig& config);
// Caller-supplied users; config.users and config.feature_bits are ignored.
[[nodiscard]] AnalysisReport linkability_study(std::span<const FeatureVector> users, const LinkabilityConfig& config);

[[nodiscard]] std::size_t count_distinct_templates(std::span<const FeatureVector> inputs,
                                                   const TransformParams& params);

[[nodiscard]] AnalysisReport revocability_check(const FeatureVector& fv, const TransformParams& params,
                                                std::size_t attempts);

}  // namespace blo::analysis
