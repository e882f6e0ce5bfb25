#pragma once

// Block Logic Operation (BLO) transform.
//
// A feature vector is cut into odd-length blocks. Each block of b bits becomes
// b-1 bits: every non-pivot bit XORed with the pivot (middle) bit, pivot dropped.
// For b = 5: (b1,b2,b3,b4,b5) -> (b1^b3, b2^b3, b4^b3, b5^b3).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "blo/bitstring.hpp"

namespace blo {

enum class PaddingPolicy : std::uint8_t {
  kZeroPad = 0x00,   // ceil(a/b) blocks, tail filled with 0-bits
  kTruncate = 0x01,  // floor(a/b) blocks, tail dropped
};

[[nodiscard]] std::string_view to_string(PaddingPolicy policy) noexcept;
// Accepts "zero-pad" and "truncate".
[[nodiscard]] PaddingPolicy parse_padding_policy(std::string_view name);

// One odd-length segment, length >= 3.
class Block {
 public:
  explicit Block(BitString bits);

  [[nodiscard]] const BitString& bits() const noexcept { return bits_; }
  [[nodiscard]] std::size_t size() const noexcept { return bits_.size(); }
  // 0-based index of the middle bit.
  [[nodiscard]] std::size_t pivot_index() const noexcept { return bits_.size() / 2; }

  friend bool operator==(const Block&, const Block&) = default;

 private:
  BitString bits_;
};

struct TransformParams {
  TransformParams(std::size_t block_size = 5, PaddingPolicy policy = PaddingPolicy::kZeroPad);

  std::size_t block_size;
  PaddingPolicy padding;

  friend bool operator==(const TransformParams&, const TransformParams&) = default;
};

[[nodiscard]] std::size_t block_count_for(std::size_t original_length, const TransformParams& params) noexcept;

class ProtectedTemplate {
 public:
  // Validates data.size() == block_count * (block_size - 1) with block_count
  // derived from original_length and the padding policy.
  ProtectedTemplate(BitString data, TransformParams params, std::size_t original_length);

  [[nodiscard]] const BitString& data() const noexcept { return data_; }
  [[nodiscard]] const TransformParams& params() const noexcept { return params_; }
  [[nodiscard]] std::size_t original_length() const noexcept { return original_length_; }
  [[nodiscard]] std::size_t block_count() const noexcept { return block_count_; }
  [[nodiscard]] BitString output_block(std::size_t index) const;

  friend bool operator==(const ProtectedTemplate&, const ProtectedTemplate&) = default;

 private:
  BitString data_;
  TransformParams params_;
  std::size_t original_length_;
  std::size_t block_count_;
};

// True when two templates carry the same comparable content: parameters, block
// count and data. Ignores original_length, which a zero-padded forgery cannot match.
[[nodiscard]] bool same_protected_content(const ProtectedTemplate& a, const ProtectedTemplate& b) noexcept;

[[nodiscard]] std::vector<Block> segment(const FeatureVector& fv, const TransformParams& params);
[[nodiscard]] BitString transform_block(const Block& blk);
[[nodiscard]] ProtectedTemplate transform(const FeatureVector& fv, const TransformParams& params);

// ".blo" codec: "BLO1", version 0x01, policy byte, u16 BE block size,
// u32 BE original length, u32 BE data bit length, packed payload.
[[nodiscard]] std::vector<std::uint8_t> encode_template(const ProtectedTemplate& tpl);
[[nodiscard]] ProtectedTemplate decode_template(std::span<const std::uint8_t> bytes);
void write_template_file(const std::filesystem::path& path, const ProtectedTemplate& tpl);
[[nodiscard]] ProtectedTemplate read_template_file(const std::filesystem::path& path);

}  // namespace blo
