#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "wfl/error.hpp"
#include "wfl/linalg.hpp"
#include "wfl/partition.hpp"

namespace wfl {

/// Ordered family of n vectors in C^d, stored as the columns of a d x n
/// matrix. Being a frame is checked on demand (frame_bounds), not here.
class FrameFamily {
 public:
  FrameFamily() = default;

  explicit FrameFamily(ComplexMatrix columns) : columns_(std::move(columns)) {
    if (columns_.rows() < 1) throw Error(ErrorCode::BadShape, "frame dimension must be >= 1");
    if (!all_finite(columns_)) throw Error(ErrorCode::BadInput, "frame has non-finite entries");
  }

  FrameFamily(std::size_t dim, const std::vector<ComplexVector>& vectors)
      : FrameFamily(stack(dim, vectors)) {}

  std::size_t dim() const noexcept { return static_cast<std::size_t>(columns_.rows()); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(columns_.cols()); }

  ComplexVector vector(std::size_t i) const { return columns_.col(static_cast<Eigen::Index>(i)); }
  auto column(std::size_t i) const { return columns_.col(static_cast<Eigen::Index>(i)); }
  const ComplexMatrix& matrix() const noexcept { return columns_; }

  FrameFamily scaled(Complex factor) const { return FrameFamily(columns_ * factor); }

  friend bool operator==(const FrameFamily& a, const FrameFamily& b) {
    return a.columns_.rows() == b.columns_.rows() && a.columns_.cols() == b.columns_.cols() &&
           a.columns_ == b.columns_;
  }

 private:
  static ComplexMatrix stack(std::size_t dim, const std::vector<ComplexVector>& vectors) {
    ComplexMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (static_cast<std::size_t>(vectors[i].size()) != dim) {
        throw Error(ErrorCode::DimMismatch, "vector " + std::to_string(i) + " has length " +
                                                std::to_string(vectors[i].size()) +
                                                ", expected " + std::to_string(dim));
      }
      m.col(static_cast<Eigen::Index>(i)) = vectors[i];
    }
    return m;
  }

  ComplexMatrix columns_;
};

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// c_i = <f, phi_i>.
inline ComplexVector analysis(const FrameFamily& frame, const ComplexVector& f) {
  if (static_cast<std::size_t>(f.size()) != frame.dim()) {
    throw Error(ErrorCode::DimMismatch, "analysis: vector length differs from frame dimension");
  }
  return frame.matrix().adjoint() * f;
}

/// sum_i c_i phi_i, accumulated in ascending index order.
inline ComplexVector synthesis(const FrameFamily& frame, const ComplexVector& coefficients) {
  if (static_cast<std::size_t>(coefficients.size()) != frame.size()) {
    throw Error(ErrorCode::DimMismatch, "synthesis: coefficient count differs from frame size");
  }
  ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(frame.dim()));
  for (std::size_t i = 0; i < frame.size(); ++i) {
    out += coefficients(static_cast<Eigen::Index>(i)) * frame.column(i);
  }
  return out;
}

/// S_J = sum_{i in J} phi_i phi_i*, ascending index order.
inline ComplexMatrix partial_frame_operator(const FrameFamily& frame, const PartitionMask& subset) {
  if (subset.size() != frame.size()) {
    throw Error(ErrorCode::ShapeMismatch, "index subset size differs from frame size");
  }
  const auto d = static_cast<Eigen::Index>(frame.dim());
  ComplexMatrix s = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (subset.contains(i)) s.noalias() += frame.column(i) * frame.column(i).adjoint();
  }
  return s;
}

inline ComplexMatrix frame_operator(const FrameFamily& frame) {
  const auto d = static_cast<Eigen::Index>(frame.dim());
  ComplexMatrix s = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    s.noalias() += frame.column(i) * frame.column(i).adjoint();
  }
  return s;
}

/// Optimal bounds (lambda_min(S), lambda_max(S)).
/// Throws NotAFrame when lambda_min <= kPdTol * lambda_max.
inline FrameBounds frame_bounds(const FrameFamily& frame) {
  const HermitianEig eig = hermitian_eig(frame_operator(frame));
  if (!(eig.max() > 0.0) || eig.min() <= kPdTol * eig.max()) {
    throw Error(ErrorCode::NotAFrame, "family does not span: lambda_min = " +
                                          std::to_string(eig.min()));
  }
  return {eig.min(), eig.max()};
}

inline bool is_frame(const FrameFamily& frame) {
  try {
    frame_bounds(frame);
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotAFrame) return false;
    throw;
  }
}

/// Canonical dual {S^{-1} phi_i}.
inline FrameFamily canonical_dual(const FrameFamily& frame) {
  try {
    return FrameFamily(psd_transform(frame_operator(frame), PsdKind::Inverse) * frame.matrix());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotPositiveDefinite) {
      throw Error(ErrorCode::NotAFrame, "canonical dual of a non-frame");
    }
    throw;
  }
}

}  // namespace wfl
