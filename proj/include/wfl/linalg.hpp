#pragma once

// Dense complex linear algebra for small Hermitian operators on C^d.
//
// Inner product convention used throughout the library:
//   <x, y> = sum_j x_j * conj(y_j)   (linear in the first slot)

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "wfl/error.hpp"

namespace wfl {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Relative tolerance on ||M - M*||_F for accepting M as Hermitian.
inline constexpr double kHermTol = 1e-9;
/// Eigenvalues at or below kPdTol * lambda_max count as zero.
inline constexpr double kPdTol = 1e-10;

inline Complex inner(const ComplexVector& x, const ComplexVector& y) {
  // Eigen's dot conjugates its left operand.
  return y.dot(x);
}

inline double norm_sq(const ComplexVector& x) { return x.squaredNorm(); }

inline ComplexMatrix adjoint(const ComplexMatrix& m) { return m.adjoint(); }

inline ComplexMatrix identity(Eigen::Index d) { return ComplexMatrix::Identity(d, d); }

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// max(1, ||M||_F); tolerances on matrices are taken relative to this.
inline double relative_scale(const ComplexMatrix& m) { return std::max(1.0, m.norm()); }

inline double hermitian_defect(const ComplexMatrix& m) { return (m - m.adjoint()).norm(); }

inline bool is_hermitian(const ComplexMatrix& m, double tol = kHermTol) {
  return m.rows() == m.cols() && hermitian_defect(m) <= tol * relative_scale(m);
}

struct HermitianEig {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors;  // unitary, eigenvectors in columns

  double min() const { return eigenvalues.size() ? eigenvalues(0) : 0.0; }
  double max() const { return eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1) : 0.0; }

  ComplexMatrix reconstruct() const {
    return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
  }
};

/// Eigendecomposition of a Hermitian matrix. Inputs within kHermTol of
/// Hermitian are symmetrized as (M + M*)/2 first.
inline HermitianEig hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "hermitian_eig needs a square matrix");
  }
  if (!all_finite(m)) throw Error(ErrorCode::BadInput, "matrix has non-finite entries");
  if (!is_hermitian(m)) {
    throw Error(ErrorCode::NotHermitian,
                "||M - M*||_F = " + std::to_string(hermitian_defect(m)));
  }
  const ComplexMatrix sym = (m + m.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NotHermitian, "eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

enum class PsdKind { Inverse, Sqrt, InvSqrt };

/// The three functions of a positive definite operator, from one
/// decomposition.
struct PsdFunctions {
  HermitianEig eig;
  ComplexMatrix inverse;
  ComplexMatrix sqrt;
  ComplexMatrix inv_sqrt;
};

namespace detail {

inline void require_positive_definite(const HermitianEig& eig) {
  const double top = eig.max();
  if (eig.eigenvalues.size() == 0) return;
  if (!(top > 0.0) || eig.min() <= kPdTol * top) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "lambda_min = " + std::to_string(eig.min()) +
                    ", lambda_max = " + std::to_string(top));
  }
}

template <typename Fn>
ComplexMatrix spectral_apply(const HermitianEig& eig, Fn fn) {
  const RealVector g = eig.eigenvalues.unaryExpr(fn);
  return eig.eigenvectors * g.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
}

}  // namespace detail

inline PsdFunctions psd_functions(const ComplexMatrix& m) {
  PsdFunctions out{hermitian_eig(m), {}, {}, {}};
  detail::require_positive_definite(out.eig);
  out.inverse = detail::spectral_apply(out.eig, [](double w) { return 1.0 / w; });
  out.sqrt = detail::spectral_apply(out.eig, [](double w) { return std::sqrt(w); });
  out.inv_sqrt = detail::spectral_apply(out.eig, [](double w) { return 1.0 / std::sqrt(w); });
  return out;
}

inline ComplexMatrix psd_transform(const ComplexMatrix& m, PsdKind kind) {
  const HermitianEig eig = hermitian_eig(m);
  detail::require_positive_definite(eig);
  switch (kind) {
    case PsdKind::Inverse:
      return detail::spectral_apply(eig, [](double w) { return 1.0 / w; });
    case PsdKind::Sqrt:
      return detail::spectral_apply(eig, [](double w) { return std::sqrt(w); });
    case PsdKind::InvSqrt:
      return detail::spectral_apply(eig, [](double w) { return 1.0 / std::sqrt(w); });
  }
  return {};
}

}  // namespace wfl
