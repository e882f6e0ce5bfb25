#pragma once

#include <cstdint>
#include <random>

namespace blo {

// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed for an independent stream of a master seed.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return mix64(mix64(master) ^ mix64(stream + 0x632BE59BD9B4E019ULL));
}

// The library's one generator: std::mt19937_64 (its output sequence is fixed by
// the standard) seeded through derive_seed. Streams split a master seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(derive_seed(seed, stream)) {}

  std::uint64_t next() { return engine_(); }
  bool next_bit() { return (engine_() >> 63) != 0; }
  // Uniform in [0, bound) by rejection, bound > 0. Not std::uniform_int_distribution,
  // whose output is implementation-defined.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t reject_under = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= reject_under) return r % bound;
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace blo
