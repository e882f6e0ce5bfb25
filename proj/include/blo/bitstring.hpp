#pragma once

// Arbitrary-length bit strings.
//
// Bit 0 is the leftmost bit as written ("10010" has bit 0 == 1). Storage packs
// bits MSB-first into 64-bit words, so word order, byte packing and lexicographic
// order of the textual form all agree. Bits past size() in the last word are
// always zero.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace blo {

class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t length, bool value = false);

  // '0'/'1' characters; whitespace is skipped. Throws MalformedInput naming the
  // offending character position.
  static BitString from_text(std::string_view text);

  // Inverse of pack(): reads `length` bits MSB-first from `bytes`.
  static BitString unpack(std::span<const std::uint8_t> bytes, std::size_t length);

  // The low `length` bits of `value`, most significant first. length <= 64.
  static BitString from_uint(std::uint64_t value, std::size_t length);

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] bool empty() const noexcept { return size_ == 0; }

  [[nodiscard]] bool operator[](std::size_t index) const noexcept {
    return (words_[index / 64] >> (63 - index % 64)) & 1U;
  }
  // Bounds-checked read.
  [[nodiscard]] bool test(std::size_t index) const;
  void set(std::size_t index, bool value);

  void push_back(bool value);
  void append(const BitString& other);
  [[nodiscard]] BitString slice(std::size_t pos, std::size_t length) const;

  // Interprets the string as an unsigned integer, bit 0 most significant. size() <= 64.
  [[nodiscard]] std::uint64_t to_uint() const;

  [[nodiscard]] std::string to_text() const;
  [[nodiscard]] std::vector<std::uint8_t> pack() const;

  [[nodiscard]] std::size_t count() const noexcept;
  [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }

  BitString& flip() noexcept;
  BitString& operator^=(const BitString& other);

  friend bool operator==(const BitString&, const BitString&) = default;
  // Shorter strings order first; equal lengths compare lexicographically.
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept;

 private:
  void clear_tail() noexcept;

  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

[[nodiscard]] BitString complement(BitString bs);
[[nodiscard]] BitString operator^(BitString a, const BitString& b);
[[nodiscard]] BitString concat(std::span<const BitString> parts);

// Throws DimensionError on length mismatch.
[[nodiscard]] std::size_t hamming_distance(const BitString& x, const BitString& y);

// Deterministic for a given (length, seed, stream). Throws InvalidArgument if length == 0.
[[nodiscard]] BitString random_bits(std::size_t length, std::uint64_t seed, std::uint64_t stream = 0);

// A raw binary biometric feature string. Never empty.
struct FeatureVector {
  FeatureVector(BitString bits, std::string provenance = {});

  BitString data;
  std::string provenance;

  [[nodiscard]] std::size_t size() const noexcept { return data.size(); }
  friend bool operator==(const FeatureVector& a, const FeatureVector& b) { return a.data == b.data; }
};

// ".bits" text files and ".fbin" packed files ("FBV1", u32 BE bit length, payload).
[[nodiscard]] std::vector<std::uint8_t> encode_fbin(const BitString& bs);
[[nodiscard]] BitString decode_fbin(std::span<const std::uint8_t> bytes);

// Sniffs the "FBV1" magic; anything else is parsed as text.
[[nodiscard]] FeatureVector read_feature_file(const std::filesystem::path& path);
void write_bits_file(const std::filesystem::path& path, const BitString& bs);
void write_fbin_file(const std::filesystem::path& path, const BitString& bs);
// Chooses the format from the extension; ".fbin" is packed, everything else text.
void write_feature_file(const std::filesystem::path& path, const BitString& bs);

namespace io {
[[nodiscard]] std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void put_u16_be(std::vector<std::uint8_t>& out, std::uint16_t v);
void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v);
[[nodiscard]] std::uint16_t get_u16_be(std::span<const std::uint8_t> in);
[[nodiscard]] std::uint32_t get_u32_be(std::span<const std::uint8_t> in);
}  // namespace io

}  // namespace blo

template <>
struct std::hash<blo::BitString> {
  std::size_t operator()(const blo::BitString& bs) const noexcept;
};
