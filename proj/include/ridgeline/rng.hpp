#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "ridgeline/errors.hpp"
#include "ridgeline/geo.hpp"

namespace ridgeline {

// Deterministic random helpers on top of mt19937_64. The distributions are
// implemented here rather than via <random> adapters because the standard
// leaves those implementation-defined; this keeps streams reproducible
// across compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw ParameterError("uniform_index: n must be positive");
    const std::uint64_t rem = (0 - n) % n;  // 2^64 mod n
    std::uint64_t x = engine_();
    while (x < rem) x = engine_();
    return x % n;
  }

  // One Box-Muller draw: two independent standard normals.
  std::pair<double, double> gaussian_pair() {
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
  }

 private:
  std::mt19937_64 engine_;
};

// First k entries of a seeded Fisher-Yates shuffle of [0, n); the draw order
// is the output order.
inline std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                           std::size_t k,
                                                           Rng& rng) {
  if (k > n) throw ParameterError("sample size exceeds population");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

}  // namespace ridgeline
