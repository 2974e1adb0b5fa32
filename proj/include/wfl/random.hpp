#pragma once

// Seeded randomness. Streams are std::mt19937_64 engines seeded through
// std::seed_seq from (seed, stream tag, indices...), so every draw is a
// pure function of its coordinates and independent of evaluation order.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "wfl/linalg.hpp"

namespace wfl {

using Rng = std::mt19937_64;

inline constexpr const char* kRngDescription =
    "mt19937_64 seeded via seed_seq(seed, stream, indices); std::normal_distribution";

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream = {}) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * stream.size());
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffU));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (std::uint64_t v : stream) push(v);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

/// Standard complex Gaussian: real and imaginary parts i.i.d. N(0, 1/2).
inline Complex complex_gaussian(Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

inline ComplexMatrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  ComplexMatrix m(rows, cols);
  // column-major fill order is part of the reproducibility contract
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = complex_gaussian(rng);
  }
  return m;
}

/// Uniform on the unit sphere of C^d (normalized Gaussian).
inline ComplexVector random_unit_vector(Rng& rng, Eigen::Index d) {
  for (;;) {
    ComplexVector v = gaussian_matrix(rng, d, 1).col(0);
    const double n = v.norm();
    if (n > 1e-300) return v / n;
  }
}

}  // namespace wfl
