#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace pursuit::rng {

/// SplitMix64 step. Used only to derive decorrelated substream seeds from a
/// user-facing seed; the streams themselves run on mt19937_64.
inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic substream seed: feed the base seed and each stream id
/// through SplitMix64 in sequence. Independent of call site and thread.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t id) noexcept {
  std::uint64_t s = base;
  std::uint64_t h = splitmix64(s);
  s = h ^ id;
  return splitmix64(s);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b) noexcept {
  return derive_seed(derive_seed(base, a), b);
}

/// A seeded random stream with explicitly-specified variate mappings so that
/// draws are reproducible bit-for-bit for a given seed.  mt19937_64 output is
/// standardized; the uniform mapping below uses the top 53 bits; Gaussians
/// use the Box-Muller transform (cached second value).
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps the log finite.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Unbiased integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Uniformly random k-subset of {0, ..., n-1} by partial Fisher-Yates,
/// returned sorted ascending.
inline std::vector<int> sample_indices(int n, int k, Stream& stream) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(stream.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace pursuit::rng
