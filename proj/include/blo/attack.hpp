#pragma once

// Constructive inversion of the BLO transform.
//
// Every output block c has exactly two pre-images: c XOR 0...0 with a 0 pivot
// inserted, and its bitwise complement (c XOR 1...1 with a 1 pivot). A template
// of n blocks therefore has a fiber of exactly 2^n feature vectors, each of
// which authenticates.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "blo/bitstring.hpp"
#include "blo/transform.hpp"

namespace blo {

// Per-block choice: bit i == 0 picks the pivot=0 pre-image of block i.
struct Selector {
  BitString choices;

  [[nodiscard]] static Selector uniform(std::size_t block_count, bool choice);
  // The selector whose choices, read as a binary number (block 0 most
  // significant), equal `rank`.
  [[nodiscard]] static Selector from_rank(std::uint64_t rank, std::size_t block_count);
  [[nodiscard]] static Selector random(std::size_t block_count, std::uint64_t seed, std::uint64_t stream = 0);
};

[[nodiscard]] Block invert_block(const BitString& out, bool pivot_choice);

[[nodiscard]] FeatureVector forge(const ProtectedTemplate& tpl, const Selector& sel);

// Calls fn for each forged vector in ascending selector order, min(2^n, limit) times.
void for_each_preimage(const ProtectedTemplate& tpl, std::uint64_t limit,
                       const std::function<void(const Selector&, const FeatureVector&)>& fn);
[[nodiscard]] std::vector<FeatureVector> enumerate_preimages(const ProtectedTemplate& tpl, std::uint64_t limit);

// 2^exponent, exact.
struct PreimageCount {
  unsigned base = 2;
  std::size_t exponent = 0;

  [[nodiscard]] std::optional<std::uint64_t> value() const noexcept;
  // Decimal when it fits in 62 bits, otherwise "2^n".
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const PreimageCount&, const PreimageCount&) = default;
};

[[nodiscard]] PreimageCount count_preimages(const ProtectedTemplate& tpl) noexcept;

struct PreimageRow {
  BitString output;
  BitString pivot_zero;  // pre-image with pivot bit 0
  BitString pivot_one;   // its complement
};

struct PreimageTable {
  std::size_t block_size = 0;
  std::vector<PreimageRow> rows;  // ascending by output
};

inline constexpr std::size_t kMaxTableBlockSize = 17;

[[nodiscard]] PreimageTable build_table(std::size_t block_size);
// One "output  pivot0  pivot1" line per row.
[[nodiscard]] std::string format_table(const PreimageTable& table);

}  // namespace blo
