#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace closek {

// Distribution helpers with a fixed, portable mapping from engine output, so
// generated data is identical across standard library implementations.
using Rng = std::mt19937_64;

/// Uniform on the open interval (0, 1).
inline double uniform_open01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform on the open interval (lo, hi).
inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_open01(rng);
}

/// Uniform index in [0, n). n must be positive.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  // Lemire's multiply-shift; bias is below 2^-64 * n and irrelevant here.
  __extension__ typedef unsigned __int128 Wide;
  const Wide wide = static_cast<Wide>(rng()) * n;
  return static_cast<std::size_t>(wide >> 64);
}

template <typename T>
void shuffle(std::span<T> values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = uniform_index(rng, i);
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace closek
