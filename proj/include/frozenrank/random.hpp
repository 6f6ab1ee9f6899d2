#pragma once

// Counter-based randomness. Every random quantity in the library is a pure
// function of a 64-bit seed and a handful of integer coordinates, so that
// couplings across n, p and matrix nestings are exact and trials can be run
// in any order.

#include <cstdint>
#include <limits>

namespace frozenrank {

// Domain tags keep the random sources of one trial independent.
enum class Purpose : std::uint64_t {
  edges = 0x65646765,
  permutation = 0x7065726d,
  weights = 0x77656967,
  theta = 0x74686574,
  pert_rows = 0x70726f77,
  pert_cols = 0x70636f6c,
};

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash64(std::uint64_t seed, std::uint64_t a) noexcept {
  return mix64(mix64(seed) ^ (a + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t hash64(std::uint64_t seed, std::uint64_t a,
                               std::uint64_t b) noexcept {
  return hash64(hash64(seed, a), b);
}

constexpr std::uint64_t hash64(std::uint64_t seed, std::uint64_t a,
                               std::uint64_t b, std::uint64_t c) noexcept {
  return hash64(hash64(seed, a, b), c);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                 Purpose purpose) noexcept {
  return hash64(master, index, static_cast<std::uint64_t>(purpose));
}

// Uniform double in [0,1) from the top 53 bits.
constexpr double unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Multiply-high reduction to [0, bound). Bias is at most bound / 2^64.
inline std::uint64_t reduce_below(std::uint64_t bits, std::uint64_t bound) noexcept {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(bits) * bound) >> 64);
}

// Sequential stream on top of the counter hash; satisfies
// UniformRandomBitGenerator.
class SeededStream {
 public:
  using result_type = std::uint64_t;

  explicit SeededStream(std::uint64_t seed) noexcept : seed_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return hash64(seed_, counter_++); }

  // Exactly uniform on [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    const std::uint64_t limit = max() - (max() % bound + 1) % bound;
    for (;;) {
      const std::uint64_t x = (*this)();
      if (x <= limit) return x % bound;
    }
  }

  double uniform() noexcept { return unit_interval((*this)()); }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace frozenrank
