#pragma once

#include <cstdint>
#include <random>
#include <ranges>
#include <utility>

namespace darija {

/// Seeded 64-bit generator. Integer and real draws are implemented here
/// rather than through <random> distributions so sequences do not depend on
/// the standard library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  /// Uniform real in [0, 1) with 53 bits of randomness.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Fisher-Yates, walking from the back.
  template <std::ranges::random_access_range R>
  void shuffle(R&& items) {
    const auto first = std::ranges::begin(items);
    for (auto i = static_cast<std::uint64_t>(std::ranges::size(items)); i > 1; --i) {
      const auto j = uniform_index(i);
      std::ranges::iter_swap(first + static_cast<std::ptrdiff_t>(i - 1), first + static_cast<std::ptrdiff_t>(j));
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace darija
