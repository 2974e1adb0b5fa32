#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wfl/error.hpp"
#include "wfl/frames.hpp"
#include "wfl/linalg.hpp"
#include "wfl/partition.hpp"
#include "wfl/random.hpp"

namespace wfl {

inline constexpr std::size_t kDefaultMaxN = 14;

namespace detail {

inline void require_same_shape(const FrameFamily& phi, const FrameFamily& psi) {
  if (phi.size() != psi.size() || phi.dim() != psi.dim()) {
    throw Error(ErrorCode::ShapeMismatch,
                "frames differ in shape: " + std::to_string(phi.dim()) + "x" +
                    std::to_string(phi.size()) + " vs " + std::to_string(psi.dim()) + "x" +
                    std::to_string(psi.size()));
  }
}

inline void require_partition(const FrameFamily& phi, const PartitionMask& sigma) {
  if (sigma.size() != phi.size()) {
    throw Error(ErrorCode::ShapeMismatch, "partition size differs from frame size");
  }
}

}  // namespace detail

/// w_i = phi_i for i in sigma, psi_i otherwise. Index positions are kept.
inline FrameFamily weave(const FrameFamily& phi, const FrameFamily& psi, const PartitionMask& sigma) {
  detail::require_same_shape(phi, psi);
  detail::require_partition(phi, sigma);
  ComplexMatrix w = psi.matrix();
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (sigma.contains(i)) w.col(static_cast<Eigen::Index>(i)) = phi.column(i);
  }
  return FrameFamily(std::move(w));
}

/// A single weaving of (phi, psi) at sigma with its operators cached:
///   S_W          frame operator of the weaving
///   S_W^sigma    sum over sigma of phi_i phi_i*
///   S_W^sigma_c  sum over sigma^c of psi_i psi_i*
/// plus S_W^{-1}, S_W^{1/2}, S_W^{-1/2} and the canonical dual vectors
/// S_W^{-1} w_i. Immutable after construction.
class WeavingContext {
 public:
  WeavingContext(FrameFamily phi, FrameFamily psi, PartitionMask sigma)
      : phi_(std::move(phi)), psi_(std::move(psi)), sigma_(sigma) {
    woven_ = weave(phi_, psi_, sigma_);
    s_sigma_ = partial_frame_operator(phi_, sigma_);
    s_sigma_c_ = partial_frame_operator(psi_, sigma_.complement());
    s_w_ = wfl::frame_operator(woven_);
    PsdFunctions fns;
    try {
      fns = psd_functions(s_w_);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotPositiveDefinite) throw;
      throw Error(ErrorCode::NotWovenAtPartition,
                  "weaving at sigma=" + std::to_string(sigma_.bits()) + " is not a frame",
                  sigma_.bits());
    }
    eigenvalues_ = fns.eig.eigenvalues;
    s_inv_ = std::move(fns.inverse);
    s_sqrt_ = std::move(fns.sqrt);
    s_inv_sqrt_ = std::move(fns.inv_sqrt);
    dual_ = s_inv_ * woven_.matrix();
  }

  const FrameFamily& phi() const noexcept { return phi_; }
  const FrameFamily& psi() const noexcept { return psi_; }
  const PartitionMask& sigma() const noexcept { return sigma_; }
  const FrameFamily& woven() const noexcept { return woven_; }

  std::size_t dim() const noexcept { return phi_.dim(); }
  std::size_t size() const noexcept { return phi_.size(); }

  const ComplexMatrix& frame_operator() const noexcept { return s_w_; }
  const ComplexMatrix& sigma_operator() const noexcept { return s_sigma_; }
  const ComplexMatrix& sigma_c_operator() const noexcept { return s_sigma_c_; }
  const ComplexMatrix& inverse() const noexcept { return s_inv_; }
  const ComplexMatrix& sqrt() const noexcept { return s_sqrt_; }
  const ComplexMatrix& inv_sqrt() const noexcept { return s_inv_sqrt_; }

  /// Columns S_W^{-1} w_i (S_W^{-1} phi_i on sigma, S_W^{-1} psi_i on sigma^c).
  const ComplexMatrix& dual_vectors() const noexcept { return dual_; }

  FrameBounds bounds() const {
    return {eigenvalues_(0), eigenvalues_(eigenvalues_.size() - 1)};
  }

  /// ||S_W - A I||_F <= rel_tol * A with A = tr(S_W)/d; returns A if so.
  std::optional<double> tight_constant(double rel_tol = 1e-8) const {
    const double a = s_w_.trace().real() / static_cast<double>(dim());
    const auto d = static_cast<Eigen::Index>(dim());
    if ((s_w_ - a * ComplexMatrix::Identity(d, d)).norm() <= rel_tol * a) return a;
    return std::nullopt;
  }

  bool is_parseval(double tol = 1e-8) const {
    const auto d = static_cast<Eigen::Index>(dim());
    return (s_w_ - ComplexMatrix::Identity(d, d)).norm() <= tol;
  }

 private:
  FrameFamily phi_;
  FrameFamily psi_;
  PartitionMask sigma_;
  FrameFamily woven_;
  ComplexMatrix s_w_;
  ComplexMatrix s_sigma_;
  ComplexMatrix s_sigma_c_;
  ComplexMatrix s_inv_;
  ComplexMatrix s_sqrt_;
  ComplexMatrix s_inv_sqrt_;
  ComplexMatrix dual_;
  RealVector eigenvalues_;
};

inline WeavingContext weaving_context(const FrameFamily& phi, const FrameFamily& psi,
                                      const PartitionMask& sigma) {
  return WeavingContext(phi, psi, sigma);
}

/// Universal bounds over every partition, found by exhaustive sweep.
struct WovenCertificate {
  std::size_t n = 0;
  double lower = 0.0;
  double upper = 0.0;
  PartitionMask witness_lower;
  PartitionMask witness_upper;
  std::uint64_t partitions_checked = 0;
  /// Weavings whose lambda_min lies within 10 * kPdTol * lambda_max.
  std::uint64_t borderline = 0;

  bool complete() const {
    return n < 64 && partitions_checked == (std::uint64_t{1} << n);
  }
};

namespace detail {

struct SweepChunk {
  double lower = std::numeric_limits<double>::infinity();
  double upper = -std::numeric_limits<double>::infinity();
  std::uint64_t lower_bits = 0;
  std::uint64_t upper_bits = 0;
  std::uint64_t checked = 0;
  std::uint64_t borderline = 0;
  std::optional<std::uint64_t> failure;
};

inline SweepChunk sweep_partitions(const FrameFamily& phi, const FrameFamily& psi,
                                   std::uint64_t begin, std::uint64_t end) {
  SweepChunk out;
  const std::size_t n = phi.size();
  for (std::uint64_t bits = begin; bits < end; ++bits) {
    const PartitionMask sigma(n, bits);
    const ComplexMatrix s =
        partial_frame_operator(phi, sigma) + partial_frame_operator(psi, sigma.complement());
    const HermitianEig eig = hermitian_eig(s);
    ++out.checked;
    const double lo = eig.min();
    const double hi = eig.max();
    if (!(hi > 0.0) || lo <= kPdTol * hi) {
      out.failure = bits;
      return out;
    }
    if (lo <= 10.0 * kPdTol * hi) ++out.borderline;
    if (lo < out.lower) {
      out.lower = lo;
      out.lower_bits = bits;
    }
    if (hi > out.upper) {
      out.upper = hi;
      out.upper_bits = bits;
    }
  }
  return out;
}

}  // namespace detail

/// Exhaustive woven-ness certification over all 2^n partitions in
/// ascending mask order. Throws NotWoven (witness = first failing mask)
/// or TooLarge when n > max_n. The result does not depend on `workers`.
inline WovenCertificate woven_bounds_bruteforce(const FrameFamily& phi, const FrameFamily& psi,
                                                std::size_t max_n = kDefaultMaxN,
                                                unsigned workers = 1) {
  detail::require_same_shape(phi, psi);
  const std::size_t n = phi.size();
  if (n > max_n || n >= 63) {
    throw Error(ErrorCode::TooLarge, "n = " + std::to_string(n) + " exceeds max_n = " +
                                         std::to_string(max_n));
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  const std::uint64_t chunks = std::clamp<std::uint64_t>(workers, 1, total);

  std::vector<detail::SweepChunk> parts;
  if (chunks == 1) {
    parts.push_back(detail::sweep_partitions(phi, psi, 0, total));
  } else {
    std::vector<std::future<detail::SweepChunk>> pending;
    for (std::uint64_t c = 0; c < chunks; ++c) {
      const std::uint64_t begin = total * c / chunks;
      const std::uint64_t end = total * (c + 1) / chunks;
      pending.push_back(std::async(std::launch::async, [&phi, &psi, begin, end] {
        return detail::sweep_partitions(phi, psi, begin, end);
      }));
    }
    for (auto& p : pending) parts.push_back(p.get());
  }

  // Chunks are contiguous and ascending, so the first failing chunk holds
  // the globally first failing mask.
  for (const auto& part : parts) {
    if (part.failure) {
      throw Error(ErrorCode::NotWoven,
                  "weaving at sigma=" + std::to_string(*part.failure) + " is not a frame",
                  *part.failure);
    }
  }

  WovenCertificate cert;
  cert.n = n;
  cert.lower = std::numeric_limits<double>::infinity();
  cert.upper = -std::numeric_limits<double>::infinity();
  for (const auto& part : parts) {
    // strict comparisons keep the smallest mask among ties
    if (part.lower < cert.lower) {
      cert.lower = part.lower;
      cert.witness_lower = PartitionMask(n, part.lower_bits);
    }
    if (part.upper > cert.upper) {
      cert.upper = part.upper;
      cert.witness_upper = PartitionMask(n, part.upper_bits);
    }
    cert.partitions_checked += part.checked;
    cert.borderline += part.borderline;
  }
  return cert;
}

/// Canonical dual of the weaving: S_W^{-1} w_i.
inline FrameFamily canonical_weaving_dual(const WeavingContext& ctx) {
  return FrameFamily(ctx.dual_vectors());
}

/// Operator residual ||sum_i theta_i w_i* - I||_F of the reconstruction
/// f = sum_i <f, w_i> theta_i; zero exactly for a dual of the weaving.
inline double validate_alternate_dual(const WeavingContext& ctx, const FrameFamily& theta) {
  if (theta.size() != ctx.size() || theta.dim() != ctx.dim()) {
    throw Error(ErrorCode::ShapeMismatch, "dual family shape differs from the weaving");
  }
  const auto d = static_cast<Eigen::Index>(ctx.dim());
  const ComplexMatrix recon = theta.matrix() * ctx.woven().matrix().adjoint();
  return (recon - ComplexMatrix::Identity(d, d)).norm();
}

/// Canonical dual plus a seeded perturbation U with U W* = 0, where W is
/// the synthesis matrix of the weaving: U = R (I - W* S_W^{-1} W) for a
/// Gaussian R. Throws NoFreedom when n == d.
inline FrameFamily random_alternate_dual(const WeavingContext& ctx, std::uint64_t seed) {
  const auto d = static_cast<Eigen::Index>(ctx.dim());
  const auto n = static_cast<Eigen::Index>(ctx.size());
  if (n <= d) {
    throw Error(ErrorCode::NoFreedom, "n == d: the canonical dual is the only dual");
  }
  Rng rng = make_rng(seed, {0x616c74ULL});
  const ComplexMatrix r = gaussian_matrix(rng, d, n);
  const ComplexMatrix& w = ctx.woven().matrix();
  const ComplexMatrix range_projector = w.adjoint() * ctx.inverse() * w;
  const ComplexMatrix u = r - r * range_projector;
  return FrameFamily(ctx.dual_vectors() + u);
}

}  // namespace wfl
