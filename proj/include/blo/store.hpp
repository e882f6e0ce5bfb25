#pragma once

// On-disk enrollment store modelling several devices that each hold protected
// templates.
//
//   <root>/manifest.tsv          deviceId, userId, file, blockSize, originalLength, enrolledAt
//   <root>/<deviceId>/<userId>.blo
//
// Single writer; callers serialize concurrent enrollments themselves.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "blo/bitstring.hpp"
#include "blo/matcher.hpp"
#include "blo/transform.hpp"

namespace blo::store {

inline constexpr const char* kManifestName = "manifest.tsv";

struct EnrollmentRecord {
  std::string device_id;
  std::string user_id;
  ProtectedTemplate tpl;
  std::int64_t enrolled_at = 0;  // seconds since epoch
};

struct RecordInfo {
  std::string device_id;
  std::string user_id;
  std::string file;  // relative to the store root
  std::size_t block_size = 0;
  std::size_t original_length = 0;
  std::int64_t enrolled_at = 0;

  friend bool operator==(const RecordInfo&, const RecordInfo&) = default;
};

// Throws InvalidArgument for empty ids and ids containing path separators,
// control characters, or equal to "." / "..".
void validate_id(const std::string& id, const char* what);

// Creates <root>/<device> as needed. Re-enrolling an existing (device, user)
// replaces the template and its manifest line in place.
void enroll(const std::filesystem::path& root, const EnrollmentRecord& rec);

[[nodiscard]] ProtectedTemplate load_template(const std::filesystem::path& root, const std::string& device_id,
                                              const std::string& user_id);

// Transforms the probe with the stored template's parameters and matches.
// Throws NotFound for an unknown (device, user).
[[nodiscard]] MatchDecision authenticate(const std::filesystem::path& root, const std::string& device_id,
                                         const std::string& user_id, const FeatureVector& probe,
                                         double threshold = kDefaultMatchThreshold);

// Manifest order. A missing manifest is an empty store; a corrupt one throws
// FormatError naming the line.
[[nodiscard]] std::vector<RecordInfo> list_records(const std::filesystem::path& root);

}  // namespace blo::store
