#include "blo/store.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unordered_set>

#include "blo/errors.hpp"

namespace blo::store {

namespace fs = std::filesystem;

namespace {

template <typename Int>
bool parse_int(const std::string& s, Int& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string manifest_line(const RecordInfo& info) {
  std::ostringstream os;
  os << info.device_id << '\t' << info.user_id << '\t' << info.file << '\t' << info.block_size << '\t'
     << info.original_length << '\t' << info.enrolled_at << '\n';
  return os.str();
}

void require_root(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw StorageError("store root " + root.string() + " is not a directory");
}

void write_manifest(const fs::path& root, const std::vector<RecordInfo>& records) {
  const fs::path tmp = root / (std::string(kManifestName) + ".tmp");
  std::string text;
  for (const auto& r : records) text += manifest_line(r);
  io::write_file(tmp, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  std::error_code ec;
  fs::rename(tmp, root / kManifestName, ec);
  if (ec) throw StorageError("cannot replace manifest: " + ec.message());
}

}  // namespace

void validate_id(const std::string& id, const char* what) {
  if (id.empty()) throw InvalidArgument(std::string(what) + " must not be empty");
  if (id == "." || id == "..") throw InvalidArgument(std::string(what) + " must not be '.' or '..'");
  for (unsigned char c : id) {
    if (c == '/' || c == '\\' || c < 0x20 || c == 0x7F) {
      throw InvalidArgument(std::string(what) + " '" + id + "' contains a path separator or control character");
    }
  }
}

void enroll(const fs::path& root, const EnrollmentRecord& rec) {
  validate_id(rec.device_id, "device id");
  validate_id(rec.user_id, "user id");
  require_root(root);

  std::error_code ec;
  fs::create_directories(root / rec.device_id, ec);
  if (ec) throw StorageError("cannot create device directory: " + ec.message());

  RecordInfo info{rec.device_id,
                  rec.user_id,
                  rec.device_id + "/" + rec.user_id + ".blo",
                  rec.tpl.params().block_size,
                  rec.tpl.original_length(),
                  rec.enrolled_at};
  write_template_file(root / info.file, rec.tpl);

  auto records = list_records(root);
  for (auto& existing : records) {
    if (existing.device_id == info.device_id && existing.user_id == info.user_id) {
      existing = info;
      write_manifest(root, records);
      return;
    }
  }
  std::ofstream out(root / kManifestName, std::ios::binary | std::ios::app);
  if (!out) throw StorageError("cannot open manifest for appending");
  out << manifest_line(info);
  if (!out) throw StorageError("manifest append failed");
}

ProtectedTemplate load_template(const fs::path& root, const std::string& device_id, const std::string& user_id) {
  validate_id(device_id, "device id");
  validate_id(user_id, "user id");
  for (const auto& r : list_records(root)) {
    if (r.device_id == device_id && r.user_id == user_id) return read_template_file(root / r.file);
  }
  throw NotFound("no enrollment for user '" + user_id + "' on device '" + device_id + "'");
}

MatchDecision authenticate(const fs::path& root, const std::string& device_id, const std::string& user_id,
                           const FeatureVector& probe, double threshold) {
  const ProtectedTemplate stored = load_template(root, device_id, user_id);
  return match_templates(transform(probe, stored.params()), stored, threshold);
}

std::vector<RecordInfo> list_records(const fs::path& root) {
  require_root(root);
  std::vector<RecordInfo> out;
  const fs::path manifest = root / kManifestName;
  std::error_code ec;
  if (!fs::exists(manifest, ec)) return out;

  std::ifstream in(manifest, std::ios::binary);
  if (!in) throw StorageError("cannot open " + manifest.string());
  std::unordered_set<std::string> keys;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fail = [&](const std::string& why) -> FormatError {
      return FormatError(manifest.string() + ":" + std::to_string(line_no) + ": " + why);
    };
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 6) throw fail("expected 6 tab-separated fields, found " + std::to_string(fields.size()));
    RecordInfo r;
    r.device_id = fields[0];
    r.user_id = fields[1];
    r.file = fields[2];
    try {
      validate_id(r.device_id, "device id");
      validate_id(r.user_id, "user id");
    } catch (const InvalidArgument& e) {
      throw fail(e.what());
    }
    if (r.file != r.device_id + "/" + r.user_id + ".blo") throw fail("unexpected template path '" + r.file + "'");
    if (!parse_int(fields[3], r.block_size) || !parse_int(fields[4], r.original_length) ||
        !parse_int(fields[5], r.enrolled_at)) {
      throw fail("non-numeric blockSize, originalLength or enrolledAt");
    }
    if (!keys.insert(r.device_id + '\t' + r.user_id).second) throw fail("duplicate (device, user) entry");
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace blo::store
