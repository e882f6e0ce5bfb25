#include "blo/attack.hpp"

#include <algorithm>
#include <limits>

#include "blo/errors.hpp"

namespace blo {

Selector Selector::uniform(std::size_t block_count, bool choice) { return {BitString(block_count, choice)}; }

Selector Selector::from_rank(std::uint64_t rank, std::size_t block_count) {
  BitString choices(block_count);
  for (std::size_t k = 0; k < 64 && k < block_count; ++k) {
    if ((rank >> k) & 1U) choices.set(block_count - 1 - k, true);
  }
  if (block_count < 64 && (rank >> block_count) != 0) {
    throw InvalidArgument("selector rank " + std::to_string(rank) + " needs more than " +
                          std::to_string(block_count) + " bits");
  }
  return {std::move(choices)};
}

Selector Selector::random(std::size_t block_count, std::uint64_t seed, std::uint64_t stream) {
  return {random_bits(block_count, seed, stream)};
}

Block invert_block(const BitString& out, bool pivot_choice) {
  if (out.size() < 2 || out.size() % 2 != 0) {
    throw DimensionError("output block must have even length >= 2, got " + std::to_string(out.size()));
  }
  const std::size_t pivot = out.size() / 2;
  BitString in(out.size() + 1);
  for (std::size_t i = 0, j = 0; i < in.size(); ++i) {
    in.set(i, i == pivot ? pivot_choice : (out[j++] != pivot_choice));
  }
  return Block(std::move(in));
}

FeatureVector forge(const ProtectedTemplate& tpl, const Selector& sel) {
  if (sel.choices.size() != tpl.block_count()) {
    throw DimensionError("selector has " + std::to_string(sel.choices.size()) + " bits, template has " +
                         std::to_string(tpl.block_count()) + " blocks");
  }
  BitString out;
  for (std::size_t i = 0; i < tpl.block_count(); ++i) {
    out.append(invert_block(tpl.output_block(i), sel.choices[i]).bits());
  }
  return FeatureVector(std::move(out), "forged:" + sel.choices.to_text());
}

void for_each_preimage(const ProtectedTemplate& tpl, std::uint64_t limit,
                       const std::function<void(const Selector&, const FeatureVector&)>& fn) {
  const std::size_t n = tpl.block_count();
  const std::uint64_t total = n < 64 ? std::uint64_t{1} << n : std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t stop = std::min(total, limit);
  for (std::uint64_t rank = 0; rank < stop; ++rank) {
    const Selector sel = Selector::from_rank(rank, n);
    fn(sel, forge(tpl, sel));
  }
}

std::vector<FeatureVector> enumerate_preimages(const ProtectedTemplate& tpl, std::uint64_t limit) {
  if (limit == 0) throw InvalidArgument("enumerate_preimages: limit must be >= 1");
  std::vector<FeatureVector> out;
  for_each_preimage(tpl, limit, [&](const Selector&, const FeatureVector& fv) { out.push_back(fv); });
  return out;
}

std::optional<std::uint64_t> PreimageCount::value() const noexcept {
  if (exponent > 62) return std::nullopt;
  return std::uint64_t{1} << exponent;
}

std::string PreimageCount::to_string() const {
  if (auto v = value()) return std::to_string(*v);
  return "2^" + std::to_string(exponent);
}

PreimageCount count_preimages(const ProtectedTemplate& tpl) noexcept { return {2, tpl.block_count()}; }

PreimageTable build_table(std::size_t block_size) {
  if (block_size < 3 || block_size % 2 == 0 || block_size > kMaxTableBlockSize) {
    throw InvalidArgument("table block size must be odd in [3, " + std::to_string(kMaxTableBlockSize) + "], got " +
                          std::to_string(block_size));
  }
  const std::size_t width = block_size - 1;
  PreimageTable table{block_size, {}};
  table.rows.reserve(std::size_t{1} << width);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << width); ++v) {
    BitString out = BitString::from_uint(v, width);
    BitString zero = invert_block(out, false).bits();
    BitString one = invert_block(out, true).bits();
    table.rows.push_back({std::move(out), std::move(zero), std::move(one)});
  }
  return table;
}

std::string format_table(const PreimageTable& table) {
  std::string text;
  for (const auto& row : table.rows) {
    text += row.output.to_text();
    text += "  ";
    text += row.pivot_zero.to_text();
    text += "  ";
    text += row.pivot_one.to_text();
    text += '\n';
  }
  return text;
}

}  // namespace blo
