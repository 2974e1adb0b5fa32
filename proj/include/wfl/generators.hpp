#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>

#include "wfl/error.hpp"
#include "wfl/frames.hpp"
#include "wfl/random.hpp"
#include "wfl/weaving.hpp"

namespace wfl {

enum class GenKind { Onb, Random, Dft, Mercedes, WovenPair };

inline const char* to_string(GenKind kind) {
  switch (kind) {
    case GenKind::Onb: return "onb";
    case GenKind::Random: return "random";
    case GenKind::Dft: return "dft";
    case GenKind::Mercedes: return "mercedes";
    case GenKind::WovenPair: return "woven_pair";
  }
  return "?";
}

inline GenKind parse_gen_kind(const std::string& s) {
  if (s == "onb") return GenKind::Onb;
  if (s == "random") return GenKind::Random;
  if (s == "dft") return GenKind::Dft;
  if (s == "mercedes") return GenKind::Mercedes;
  if (s == "woven_pair" || s == "woven-pair") return GenKind::WovenPair;
  throw Error(ErrorCode::BadInput, "unknown generator kind '" + s + "'");
}

struct GenSpec {
  GenKind kind = GenKind::Random;
  std::size_t dim = 2;
  std::size_t count = 4;
  std::uint64_t seed = 1;
  double epsilon = 0.1;

  void validate() const {
    if (dim < 1) throw Error(ErrorCode::BadShape, "dim must be >= 1");
    if (kind != GenKind::Onb && kind != GenKind::Mercedes && count < dim) {
      throw Error(ErrorCode::BadShape, "count must be >= dim");
    }
    if (!(epsilon >= 0.0)) throw Error(ErrorCode::BadShape, "epsilon must be >= 0");
  }
};

inline FrameFamily gen_onb(std::size_t d) {
  if (d < 1) throw Error(ErrorCode::BadShape, "dim must be >= 1");
  const auto n = static_cast<Eigen::Index>(d);
  return FrameFamily(ComplexMatrix::Identity(n, n));
}

/// Harmonic frame phi_k[j] = exp(2 pi i j k / n) / sqrt(n), j < d, k < n.
inline FrameFamily gen_dft(std::size_t d, std::size_t n) {
  if (d < 1 || n < d) throw Error(ErrorCode::BadShape, "dft frame needs n >= d >= 1");
  ComplexMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < d; ++j) {
      // reduce jk mod n before scaling to keep the angle exact for large products
      const double angle =
          2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = std::polar(scale, angle);
    }
  }
  return FrameFamily(std::move(m));
}

/// Mercedes-Benz frame: three unit vectors at 120 degrees in R^2, tight with A = 3/2.
inline FrameFamily gen_mercedes() {
  const double h = std::sqrt(3.0) / 2.0;
  ComplexMatrix m(2, 3);
  m << 0.0, -h, h,
       1.0, -0.5, -0.5;
  return FrameFamily(std::move(m));
}

/// i.i.d. standard complex Gaussian entries. Throws NotAFrame on a
/// degenerate draw.
inline FrameFamily gen_random(std::size_t d, std::size_t n, std::uint64_t seed) {
  if (d < 1 || n < d) throw Error(ErrorCode::BadShape, "random frame needs n >= d >= 1");
  Rng rng = make_rng(seed, {0x72616e64ULL});
  FrameFamily frame(gaussian_matrix(rng, static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n)));
  frame_bounds(frame);
  return frame;
}

struct WovenPair {
  FrameFamily phi;
  FrameFamily psi;
  WovenCertificate certificate;
  double epsilon = 0.0;   // perturbation radius actually used
  unsigned attempts = 0;
};

inline constexpr unsigned kWovenPairRetries = 8;

/// psi_i = phi_i + epsilon * u_i with seeded unit vectors u_i, certified by
/// exhaustive sweep; epsilon is halved after each NotWoven, up to
/// kWovenPairRetries times.
inline WovenPair gen_woven_pair_from(const FrameFamily& phi, double epsilon, std::uint64_t seed,
                                     std::size_t max_n = kDefaultMaxN) {
  if (!(epsilon >= 0.0)) throw Error(ErrorCode::BadShape, "epsilon must be >= 0");
  if (phi.size() > max_n) {
    throw Error(ErrorCode::TooLarge, "n exceeds brute-force limit " + std::to_string(max_n));
  }
  const auto d = static_cast<Eigen::Index>(phi.dim());
  Rng rng = make_rng(seed, {0x70657274ULL});
  ComplexMatrix directions(d, static_cast<Eigen::Index>(phi.size()));
  for (Eigen::Index i = 0; i < directions.cols(); ++i) directions.col(i) = random_unit_vector(rng, d);

  double eps = epsilon;
  for (unsigned attempt = 0; attempt <= kWovenPairRetries; ++attempt) {
    FrameFamily psi(phi.matrix() + eps * directions);
    try {
      WovenCertificate cert = woven_bounds_bruteforce(phi, psi, max_n);
      return {phi, std::move(psi), cert, eps, attempt + 1};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotWoven) throw;
    }
    eps *= 0.5;
  }
  throw Error(ErrorCode::GenerationFailed,
              "no woven pair after " + std::to_string(kWovenPairRetries) + " retries");
}

inline WovenPair gen_woven_pair(std::size_t d, std::size_t n, double epsilon, std::uint64_t seed,
                                std::size_t max_n = kDefaultMaxN) {
  if (n > max_n) throw Error(ErrorCode::TooLarge, "n exceeds brute-force limit");
  return gen_woven_pair_from(gen_random(d, n, seed), epsilon, seed, max_n);
}

}  // namespace wfl
