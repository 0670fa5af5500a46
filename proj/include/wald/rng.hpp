#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>

namespace wald {

/// One step of the splitmix64 generator. Used to decorrelate derived seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the `index`-th independent stream under `base`. Depends only on
/// (base, index), so stream assignment is independent of evaluation order.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(base) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Portable random source: the mt19937_64 sequence is fixed by the standard,
/// and every transform below is written out here rather than delegated to
/// the implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), unbiased by rejection.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: empty range");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  /// Draw from a discrete distribution by cdf inversion on one uniform.
  /// `pmf` need not sum to exactly 1; the last index absorbs the rounding tail.
  std::size_t discrete(std::span<const double> pmf) {
    const double u = uniform();
    double cdf = 0.0;
    for (std::size_t i = 0; i + 1 < pmf.size(); ++i) {
      cdf += pmf[i];
      if (u < cdf) return i;
    }
    return pmf.empty() ? 0 : pmf.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wald
