#include "blo/transform.hpp"

#include <algorithm>

#include "blo/errors.hpp"

namespace blo {

namespace {

constexpr std::uint8_t kBloMagic[4] = {'B', 'L', 'O', '1'};
constexpr std::uint8_t kBloVersion = 0x01;
constexpr std::size_t kBloHeaderSize = 4 + 1 + 1 + 2 + 4 + 4;

void check_block_size(std::size_t b) {
  if (b < 3 || b % 2 == 0) {
    throw InvalidArgument("block size must be odd and >= 3, got " + std::to_string(b));
  }
  if (b > 0xFFFF) throw InvalidArgument("block size exceeds 65535");
}

}  // namespace

std::string_view to_string(PaddingPolicy policy) noexcept {
  return policy == PaddingPolicy::kTruncate ? "truncate" : "zero-pad";
}

PaddingPolicy parse_padding_policy(std::string_view name) {
  if (name == "zero-pad") return PaddingPolicy::kZeroPad;
  if (name == "truncate") return PaddingPolicy::kTruncate;
  throw InvalidArgument("unknown padding policy '" + std::string(name) + "' (expected zero-pad or truncate)");
}

Block::Block(BitString bits) : bits_(std::move(bits)) {
  if (bits_.size() < 3 || bits_.size() % 2 == 0) {
    throw InvalidArgument("block length must be odd and >= 3, got " + std::to_string(bits_.size()));
  }
}

TransformParams::TransformParams(std::size_t block_size, PaddingPolicy policy)
    : block_size(block_size), padding(policy) {
  check_block_size(block_size);
}

std::size_t block_count_for(std::size_t original_length, const TransformParams& params) noexcept {
  const std::size_t b = params.block_size;
  return params.padding == PaddingPolicy::kZeroPad ? (original_length + b - 1) / b : original_length / b;
}

ProtectedTemplate::ProtectedTemplate(BitString data, TransformParams params, std::size_t original_length)
    : data_(std::move(data)),
      params_(params),
      original_length_(original_length),
      block_count_(block_count_for(original_length, params)) {
  if (block_count_ == 0) throw InvalidArgument("template must cover at least one block");
  const std::size_t expected = block_count_ * (params_.block_size - 1);
  if (data_.size() != expected) {
    throw DimensionError("template data is " + std::to_string(data_.size()) + " bits, expected " +
                         std::to_string(expected) + " for " + std::to_string(block_count_) + " blocks");
  }
}

BitString ProtectedTemplate::output_block(std::size_t index) const {
  const std::size_t width = params_.block_size - 1;
  return data_.slice(index * width, width);
}

bool same_protected_content(const ProtectedTemplate& a, const ProtectedTemplate& b) noexcept {
  return a.params() == b.params() && a.block_count() == b.block_count() && a.data() == b.data();
}

std::vector<Block> segment(const FeatureVector& fv, const TransformParams& params) {
  const std::size_t b = params.block_size;
  if (params.padding == PaddingPolicy::kTruncate && fv.size() < b) {
    throw InvalidArgument("truncate: input of " + std::to_string(fv.size()) + " bits is shorter than block size " +
                          std::to_string(b));
  }
  const std::size_t n = block_count_for(fv.size(), params);
  std::vector<Block> blocks;
  blocks.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t start = i * b;
    const std::size_t avail = std::min(b, fv.size() - start);
    BitString bits = fv.data.slice(start, avail);
    if (avail < b) bits.append(BitString(b - avail));
    blocks.emplace_back(std::move(bits));
  }
  return blocks;
}

BitString transform_block(const Block& blk) {
  const BitString& in = blk.bits();
  const std::size_t p = blk.pivot_index();
  const bool pivot = in[p];
  BitString out(in.size() - 1);
  for (std::size_t i = 0, j = 0; i < in.size(); ++i) {
    if (i == p) continue;
    out.set(j++, in[i] != pivot);
  }
  return out;
}

ProtectedTemplate transform(const FeatureVector& fv, const TransformParams& params) {
  BitString data;
  for (const Block& blk : segment(fv, params)) data.append(transform_block(blk));
  return ProtectedTemplate(std::move(data), params, fv.size());
}

std::vector<std::uint8_t> encode_template(const ProtectedTemplate& tpl) {
  if (tpl.original_length() > 0xFFFFFFFFULL || tpl.data().size() > 0xFFFFFFFFULL) {
    throw InvalidArgument("template too large for the .blo format");
  }
  std::vector<std::uint8_t> out(std::begin(kBloMagic), std::end(kBloMagic));
  out.push_back(kBloVersion);
  out.push_back(static_cast<std::uint8_t>(tpl.params().padding));
  io::put_u16_be(out, static_cast<std::uint16_t>(tpl.params().block_size));
  io::put_u32_be(out, static_cast<std::uint32_t>(tpl.original_length()));
  io::put_u32_be(out, static_cast<std::uint32_t>(tpl.data().size()));
  const auto payload = tpl.data().pack();
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

ProtectedTemplate decode_template(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kBloHeaderSize || !std::equal(std::begin(kBloMagic), std::end(kBloMagic), bytes.begin())) {
    throw FormatError("blo: missing BLO1 header");
  }
  if (bytes[4] != kBloVersion) throw FormatError("blo: unsupported version " + std::to_string(bytes[4]));
  if (bytes[5] > 0x01) throw FormatError("blo: unknown padding policy byte " + std::to_string(bytes[5]));
  const auto policy = static_cast<PaddingPolicy>(bytes[5]);
  const std::uint16_t block_size = io::get_u16_be(bytes.subspan(6, 2));
  const std::uint32_t original_length = io::get_u32_be(bytes.subspan(8, 4));
  const std::uint32_t data_length = io::get_u32_be(bytes.subspan(12, 4));
  const auto payload = bytes.subspan(kBloHeaderSize);
  if (payload.size() != (std::size_t{data_length} + 7) / 8) {
    throw FormatError("blo: payload is " + std::to_string(payload.size()) + " bytes, header declares " +
                      std::to_string(data_length) + " bits");
  }
  try {
    return ProtectedTemplate(BitString::unpack(payload, data_length), TransformParams(block_size, policy),
                             original_length);
  } catch (const Error& e) {
    throw FormatError(std::string("blo: inconsistent header: ") + e.what());
  }
}

void write_template_file(const std::filesystem::path& path, const ProtectedTemplate& tpl) {
  io::write_file(path, encode_template(tpl));
}

ProtectedTemplate read_template_file(const std::filesystem::path& path) {
  try {
    return decode_template(io::read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace blo
