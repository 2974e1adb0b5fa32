#pragma once

// Evaluation of the weaving-frame identities and inequalities as
// IdentityRecords: named terms, a relative equality residual and/or a
// relative inequality slack, and a pass flag.
//
// Notation used in comments below, for a weaving context at sigma:
//   e_s  = sum_{i in sigma}   |<f, phi_i>|^2      (= <S^s f, f>)
//   e_c  = sum_{i in sigma^c} |<f, psi_i>|^2      (= <S^c f, f>)
//   D(g) = sum_{sigma} |<g, S_W^{-1} phi_i>|^2 + sum_{sigma^c} |<g, S_W^{-1} psi_i>|^2
//        (= <S_W^{-1} g, g>)
//
// Two misprints in the source statements are resolved here:
//  - <S^s f, f> is the sum over sigma of |<f, phi_i>|^2 (not over sigma^c).
//  - the dual-frame statements weave phi on sigma with psi on sigma^c.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wfl/error.hpp"
#include "wfl/frames.hpp"
#include "wfl/linalg.hpp"
#include "wfl/partition.hpp"
#include "wfl/weaving.hpp"

namespace wfl {

struct Tolerances {
  double eq = 1e-9;
  double ineq = 1e-9;
};

struct Term {
  std::string_view name;
  Complex value;
  bool complex_valued = false;
};

struct IdentityRecord {
  std::string_view theorem;
  std::optional<double> lambda;
  std::optional<PartitionMask> sigma;
  std::vector<Term> terms;
  std::optional<double> residual;  // |lhs - rhs| / scale
  std::optional<double> slack;     // (value - bound) / scale; negative means violated
  double scale = 1.0;
  bool pass = true;

  const Term* find(std::string_view name) const {
    for (const auto& t : terms) {
      if (t.name == name) return &t;
    }
    return nullptr;
  }

  Complex term(std::string_view name) const {
    const Term* t = find(name);
    if (t == nullptr) throw Error(ErrorCode::BadInput, "record has no term " + std::string(name));
    return t->value;
  }

  double real(std::string_view name) const { return term(name).real(); }
};

namespace detail {

/// Largest magnitude among the given quantities; 1 when all vanish, so the
/// normalization is invariant under f -> c f.
inline double scale_of(std::initializer_list<double> magnitudes) {
  double s = 0.0;
  for (double m : magnitudes) s = std::max(s, std::abs(m));
  return s > 0.0 ? s : 1.0;
}

inline void finalize(IdentityRecord& rec, const Tolerances& tol) {
  rec.pass = true;
  if (rec.residual && !(*rec.residual <= tol.eq)) rec.pass = false;
  if (rec.slack && !(*rec.slack >= -tol.ineq)) rec.pass = false;
}

inline void add(IdentityRecord& rec, std::string_view name, double v) {
  rec.terms.push_back({name, Complex(v, 0.0), false});
}

inline void add(IdentityRecord& rec, std::string_view name, Complex v) {
  rec.terms.push_back({name, v, true});
}

inline void require_square(const ComplexMatrix& p) {
  if (p.rows() != p.cols()) throw Error(ErrorCode::ShapeMismatch, "operator must be square");
}

inline void require_vector(const ComplexMatrix& p, const ComplexVector& f) {
  if (f.size() != p.cols()) throw Error(ErrorCode::DimMismatch, "vector length differs from operator size");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Operator lemmas

/// P + Q*Q = Q* + P*P for Q = I - P (any square P).
inline IdentityRecord lemma_operator_identity(const ComplexMatrix& p, const Tolerances& tol = {}) {
  detail::require_square(p);
  const ComplexMatrix q = identity(p.rows()) - p;
  const ComplexMatrix lhs = p + q.adjoint() * q;
  const ComplexMatrix rhs = q.adjoint() + p.adjoint() * p;
  IdentityRecord rec;
  rec.theorem = "operator_identity";
  const double diff = (lhs - rhs).norm();
  detail::add(rec, "lhs_norm", lhs.norm());
  detail::add(rec, "rhs_norm", rhs.norm());
  detail::add(rec, "difference_norm", diff);
  rec.scale = detail::scale_of({lhs.norm(), rhs.norm(), std::sqrt(static_cast<double>(p.rows()))});
  rec.residual = diff / rec.scale;
  detail::finalize(rec, tol);
  return rec;
}

/// For Hermitian P, Q = I - P:
///   ||Pf||^2 + l <Qf,f> = ||Qf||^2 + (2-l) <Pf,f> + (l-1) ||f||^2 >= (l - l^2/4) ||f||^2
inline IdentityRecord lemma_quadratic_bound(const ComplexMatrix& p, const ComplexVector& f,
                                            double lambda, const Tolerances& tol = {}) {
  detail::require_square(p);
  detail::require_vector(p, f);
  if (!is_hermitian(p)) throw Error(ErrorCode::NotHermitian, "quadratic bound needs Hermitian P");
  const ComplexVector pf = p * f;
  const ComplexVector qf = f - pf;
  const double ff = norm_sq(f);
  const double lhs = norm_sq(pf) + lambda * inner(qf, f).real();
  const double rhs = norm_sq(qf) + (2.0 - lambda) * inner(pf, f).real() + (lambda - 1.0) * ff;
  const double lower = (lambda - lambda * lambda / 4.0) * ff;

  IdentityRecord rec;
  rec.theorem = "quadratic_bound";
  rec.lambda = lambda;
  detail::add(rec, "lhs", lhs);
  detail::add(rec, "rhs", rhs);
  detail::add(rec, "lower_bound", lower);
  rec.scale = detail::scale_of({lhs, rhs, lower, ff});
  rec.residual = std::abs(lhs - rhs) / rec.scale;
  rec.slack = (std::min(lhs, rhs) - lower) / rec.scale;
  detail::finalize(rec, tol);
  return rec;
}

/// For any square P, Q = I - P:
///   <(P*P + l(Q*+Q)) f,f> = <(Q*Q + (1-l)(P*+P) + (2l-1)I) f,f> >= (1 - (l-1)^2) ||f||^2
inline IdentityRecord lemma_cross_bound(const ComplexMatrix& p, const ComplexVector& f,
                                        double lambda, const Tolerances& tol = {}) {
  detail::require_square(p);
  detail::require_vector(p, f);
  const ComplexVector pf = p * f;
  const ComplexVector qf = f - pf;
  const ComplexVector pa_f = p.adjoint() * f;
  const ComplexVector qa_f = f - pa_f;
  const double ff = norm_sq(f);
  // <P*P f, f> = ||Pf||^2 and <(Q* + Q) f, f> = <Q*f, f> + <Qf, f>
  const Complex lhs = norm_sq(pf) + lambda * (inner(qa_f, f) + inner(qf, f));
  const Complex rhs = norm_sq(qf) + (1.0 - lambda) * (inner(pa_f, f) + inner(pf, f)) +
                      (2.0 * lambda - 1.0) * ff;
  const double lower = (1.0 - (lambda - 1.0) * (lambda - 1.0)) * ff;

  IdentityRecord rec;
  rec.theorem = "cross_bound";
  rec.lambda = lambda;
  detail::add(rec, "lhs", lhs);
  detail::add(rec, "rhs", rhs);
  detail::add(rec, "lower_bound", lower);
  rec.scale = detail::scale_of({std::abs(lhs), std::abs(rhs), lower, ff});
  rec.residual = std::abs(lhs - rhs) / rec.scale;
  rec.slack = (std::min(lhs.real(), rhs.real()) - lower) / rec.scale;
  detail::finalize(rec, tol);
  return rec;
}

// ---------------------------------------------------------------------------
// Weaving-operator theorems

/// Every lambda-independent quantity the weaving theorems need for one
/// (context, f). All sums are direct summations over the frame vectors;
/// the context must outlive the probe.
struct WeavingProbe {
  const WeavingContext* ctx = nullptr;
  ComplexVector f;
  double norm_sq_f = 0.0;
  double energy_sigma = 0.0;          // e_s
  double energy_sigma_c = 0.0;        // e_c
  ComplexVector synth_sigma;          // S^s f = sum_{sigma} <f,phi_i> phi_i
  ComplexVector synth_sigma_c;        // S^c f = sum_{sigma^c} <f,psi_i> psi_i
  double dual_energy_sigma = 0.0;     // D(S^s f)
  double dual_energy_sigma_c = 0.0;   // D(S^c f)
};

/// D(g) by direct summation over the cached dual vectors S_W^{-1} w_i.
inline double weave_dual_energy_direct(const WeavingContext& ctx, const ComplexVector& g) {
  const ComplexMatrix& dual = ctx.dual_vectors();
  double total = 0.0;
  for (Eigen::Index i = 0; i < dual.cols(); ++i) total += std::norm(dual.col(i).dot(g));
  return total;
}

/// D(g) through the operator route <S_W^{-1} g, g>.
inline double weave_dual_energy_operator(const WeavingContext& ctx, const ComplexVector& g) {
  return inner(ctx.inverse() * g, g).real();
}

inline WeavingProbe probe(const WeavingContext& ctx, const ComplexVector& f) {
  if (static_cast<std::size_t>(f.size()) != ctx.dim()) {
    throw Error(ErrorCode::DimMismatch, "probe vector length differs from frame dimension");
  }
  WeavingProbe pr;
  pr.ctx = &ctx;
  pr.f = f;
  pr.norm_sq_f = norm_sq(f);
  const auto d = static_cast<Eigen::Index>(ctx.dim());
  pr.synth_sigma = ComplexVector::Zero(d);
  pr.synth_sigma_c = ComplexVector::Zero(d);
  const FrameFamily& w = ctx.woven();
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const Complex c = w.column(i).dot(f);  // <f, w_i>
    if (ctx.sigma().contains(i)) {
      pr.energy_sigma += std::norm(c);
      pr.synth_sigma += c * w.column(i);
    } else {
      pr.energy_sigma_c += std::norm(c);
      pr.synth_sigma_c += c * w.column(i);
    }
  }
  pr.dual_energy_sigma = weave_dual_energy_direct(ctx, pr.synth_sigma);
  pr.dual_energy_sigma_c = weave_dual_energy_direct(ctx, pr.synth_sigma_c);
  return pr;
}

/// Parseval weaving identity (requires S_W = I at this partition):
///   e_s + ||S^c f||^2 = e_c + ||S^s f||^2 >= 3/4 ||f||^2
inline IdentityRecord thm_parseval_weaving(const WeavingProbe& pr, const Tolerances& tol = {}) {
  if (!pr.ctx->is_parseval()) {
    throw Error(ErrorCode::NotParsevalWeaving, "||S_W - I||_F exceeds 1e-8");
  }
  const double lhs = pr.energy_sigma + norm_sq(pr.synth_sigma_c);
  const double rhs = pr.energy_sigma_c + norm_sq(pr.synth_sigma);
  const double lower = 0.75 * pr.norm_sq_f;
  IdentityRecord rec;
  rec.theorem = "parseval_weaving";
  rec.sigma = pr.ctx->sigma();
  detail::add(rec, "lhs", lhs);
  detail::add(rec, "rhs", rhs);
  detail::add(rec, "lower_bound", lower);
  rec.scale = detail::scale_of({lhs, rhs, pr.norm_sq_f});
  rec.residual = std::abs(lhs - rhs) / rec.scale;
  rec.slack = (std::min(lhs, rhs) - lower) / rec.scale;
  detail::finalize(rec, tol);
  return rec;
}

/// General woven pair:
///   e_s + D(S^c f) = e_c + D(S^s f) >= (l - l^2/4) e_s + (1 - l^2/4) e_c
inline IdentityRecord thm_general_weaving(const WeavingProbe& pr, double lambda,
                                          const Tolerances& tol = {}) {
  const double lhs = pr.energy_sigma + pr.dual_energy_sigma_c;
  const double rhs = pr.energy_sigma_c + pr.dual_energy_sigma;
  const double l2 = lambda * lambda / 4.0;
  const double lower = (lambda - l2) * pr.energy_sigma + (1.0 - l2) * pr.energy_sigma_c;
  IdentityRecord rec;
  rec.theorem = "general_weaving";
  rec.lambda = lambda;
  rec.sigma = pr.ctx->sigma();
  detail::add(rec, "lhs", lhs);
  detail::add(rec, "rhs", rhs);
  detail::add(rec, "lower_bound", lower);
  detail::add(rec, "energy_sigma", pr.energy_sigma);
  detail::add(rec, "energy_sigma_c", pr.energy_sigma_c);
  rec.scale = detail::scale_of({lhs, rhs, lower, pr.energy_sigma + pr.energy_sigma_c});
  rec.residual = std::abs(lhs - rhs) / rec.scale;
  rec.slack = (std::min(lhs, rhs) - lower) / rec.scale;
  detail::finalize(rec, tol);
  return rec;
}

namespace detail {

inline void chain(IdentityRecord& rec, double lower, double middle, double upper,
                  std::initializer_list<double> extra_scale) {
  double s = scale_of(extra_scale);
  s = std::max({s, std::abs(lower), std::abs(middle), std::abs(upper)});
  rec.scale = s;
  rec.slack = std::min(middle - lower, upper - middle) / s;
}

}  // namespace detail

/// 0 <= e_s - D(S^s f) <= (l^2/4) e_c + (1 - l/2)^2 e_s
inline IdentityRecord thm_sandwich(const WeavingProbe& pr, double lambda, const Tolerances& tol = {}) {
  const double middle = pr.energy_sigma - pr.dual_energy_sigma;
  const double half = 1.0 - lambda / 2.0;
  const double upper = lambda * lambda / 4.0 * pr.energy_sigma_c + half * half * pr.energy_sigma;
  IdentityRecord rec;
  rec.theorem = "sandwich";
  rec.lambda = lambda;
  rec.sigma = pr.ctx->sigma();
  detail::add(rec, "lower_bound", 0.0);
  detail::add(rec, "middle", middle);
  detail::add(rec, "upper_bound", upper);
  detail::chain(rec, 0.0, middle, upper, {pr.energy_sigma, pr.energy_sigma_c});
  detail::finalize(rec, tol);
  return rec;
}

/// (2l - l^2/2 - 1) e_s + (1 - l^2/2) e_c <= D(S^s f) + D(S^c f) <= e_s + e_c
inline IdentityRecord thm_double(const WeavingProbe& pr, double lambda, const Tolerances& tol = {}) {
  const double middle = pr.dual_energy_sigma + pr.dual_energy_sigma_c;
  const double l2 = lambda * lambda / 2.0;
  const double lower =
      (2.0 * lambda - l2 - 1.0) * pr.energy_sigma + (1.0 - l2) * pr.energy_sigma_c;
  const double upper = pr.energy_sigma + pr.energy_sigma_c;
  IdentityRecord rec;
  rec.theorem = "double";
  rec.lambda = lambda;
  rec.sigma = pr.ctx->sigma();
  detail::add(rec, "lower_bound", lower);
  detail::add(rec, "middle", middle);
  detail::add(rec, "upper_bound", upper);
  detail::chain(rec, lower, middle, upper, {pr.energy_sigma, pr.energy_sigma_c});
  detail::finalize(rec, tol);
  return rec;
}

/// Both chains for an A-tight weaving (S_W = A I):
///   0 <= A e_s - ||S^s f||^2 <= (A l^2/4) e_c + (1 - l/2)^2 A e_s
///   (2l - l^2/2 - 1) A e_s + (1 - l^2/2) A e_c <= ||S^s f||^2 + ||S^c f||^2 <= A (e_s + e_c)
/// The second upper bound equals A^2 ||f||^2. The commonly printed form
/// A ||f||^2 is kept as the term "upper_printed"; it only holds for A <= 1.
inline IdentityRecord cor_tight(const WeavingProbe& pr, double lambda, double a,
                                const Tolerances& tol = {}) {
  const WeavingContext& ctx = *pr.ctx;
  const auto d = static_cast<Eigen::Index>(ctx.dim());
  if (!(a > 0.0) || (ctx.frame_operator() - a * identity(d)).norm() > 1e-8 * a) {
    throw Error(ErrorCode::NotTightWeaving, "||S_W - A I||_F exceeds 1e-8 A");
  }
  const double es = pr.energy_sigma;
  const double ec = pr.energy_sigma_c;
  const double ss = norm_sq(pr.synth_sigma);
  const double sc = norm_sq(pr.synth_sigma_c);
  const double half = 1.0 - lambda / 2.0;
  const double l2 = lambda * lambda;

  const double mid1 = a * es - ss;
  const double up1 = a * l2 / 4.0 * ec + half * half * a * es;
  const double mid2 = ss + sc;
  const double lo2 = (2.0 * lambda - l2 / 2.0 - 1.0) * a * es + (1.0 - l2 / 2.0) * a * ec;
  const double up2 = a * (es + ec);

  IdentityRecord rec;
  rec.theorem = "cor_tight";
  rec.lambda = lambda;
  rec.sigma = ctx.sigma();
  detail::add(rec, "A", a);
  detail::add(rec, "chain1_middle", mid1);
  detail::add(rec, "chain1_upper", up1);
  detail::add(rec, "chain2_lower", lo2);
  detail::add(rec, "chain2_middle", mid2);
  detail::add(rec, "chain2_upper", up2);
  detail::add(rec, "upper_printed", a * pr.norm_sq_f);
  rec.scale = detail::scale_of({mid1, up1, mid2, lo2, up2, a * (es + ec)});
  const double gap = std::min({mid1, up1 - mid1, mid2 - lo2, up2 - mid2});
  rec.slack = gap / rec.scale;
  detail::finalize(rec, tol);
  return rec;
}

inline IdentityRecord thm_general_weaving(const WeavingContext& ctx, const ComplexVector& f,
                                          double lambda, const Tolerances& tol = {}) {
  return thm_general_weaving(probe(ctx, f), lambda, tol);
}

inline IdentityRecord thm_parseval_weaving(const WeavingContext& ctx, const ComplexVector& f,
                                           const Tolerances& tol = {}) {
  return thm_parseval_weaving(probe(ctx, f), tol);
}

inline IdentityRecord thm_sandwich(const WeavingContext& ctx, const ComplexVector& f, double lambda,
                                   const Tolerances& tol = {}) {
  return thm_sandwich(probe(ctx, f), lambda, tol);
}

inline IdentityRecord thm_double(const WeavingContext& ctx, const ComplexVector& f, double lambda,
                                 const Tolerances& tol = {}) {
  return thm_double(probe(ctx, f), lambda, tol);
}

inline IdentityRecord cor_tight(const WeavingContext& ctx, const ComplexVector& f, double lambda,
                                double a, const Tolerances& tol = {}) {
  return cor_tight(probe(ctx, f), lambda, a, tol);
}

// ---------------------------------------------------------------------------
// Alternate-dual theorems

/// A weaving together with a dual family theta (the reconstruction
/// f = sum_i <f, w_i> theta_i) and the operators
///   E_s f = sum_{sigma}   <f, theta_i> phi_i
///   E_c f = sum_{sigma^c} <f, theta_i> psi_i
/// or, with weights a_i, E uses a_i and F uses (1 - a_i).
class AltDualContext {
 public:
  /// Throws InvalidDual if the reconstruction residual exceeds 1e-8.
  static AltDualContext make(WeavingContext ctx, FrameFamily theta,
                             std::optional<std::vector<Complex>> weights = std::nullopt) {
    AltDualContext out = make_unvalidated(std::move(ctx), std::move(theta), std::move(weights));
    if (!(out.dual_residual_ <= 1e-8)) {
      throw Error(ErrorCode::InvalidDual,
                  "reconstruction residual " + std::to_string(out.dual_residual_));
    }
    return out;
  }

  /// Same as make() without the dual check; for negative controls.
  static AltDualContext make_unvalidated(WeavingContext ctx, FrameFamily theta,
                                         std::optional<std::vector<Complex>> weights = std::nullopt) {
    return AltDualContext(std::move(ctx), std::move(theta), std::move(weights));
  }

  const WeavingContext& weaving() const noexcept { return ctx_; }
  const FrameFamily& theta() const noexcept { return theta_; }
  const std::optional<std::vector<Complex>>& weights() const noexcept { return weights_; }
  double dual_residual() const noexcept { return dual_residual_; }

  const ComplexMatrix& e_sigma() const noexcept { return e_sigma_; }
  const ComplexMatrix& e_sigma_c() const noexcept { return e_sigma_c_; }
  /// Present only with weights.
  const ComplexMatrix& f_sigma() const noexcept { return f_sigma_; }
  const ComplexMatrix& f_sigma_c() const noexcept { return f_sigma_c_; }

  /// ||E_s + E_c (+ F_s + F_c) - I||_F
  double partition_of_unity_residual() const {
    const auto d = static_cast<Eigen::Index>(ctx_.dim());
    ComplexMatrix sum = e_sigma_ + e_sigma_c_;
    if (weights_) sum += f_sigma_ + f_sigma_c_;
    return (sum - identity(d)).norm();
  }

 private:
  AltDualContext(WeavingContext ctx, FrameFamily theta, std::optional<std::vector<Complex>> weights)
      : ctx_(std::move(ctx)), theta_(std::move(theta)), weights_(std::move(weights)) {
    dual_residual_ = validate_alternate_dual(ctx_, theta_);
    if (weights_ && weights_->size() != ctx_.size()) {
      throw Error(ErrorCode::ShapeMismatch, "weight count differs from frame size");
    }
    const auto d = static_cast<Eigen::Index>(ctx_.dim());
    e_sigma_ = ComplexMatrix::Zero(d, d);
    e_sigma_c_ = ComplexMatrix::Zero(d, d);
    if (weights_) {
      f_sigma_ = ComplexMatrix::Zero(d, d);
      f_sigma_c_ = ComplexMatrix::Zero(d, d);
    }
    const FrameFamily& w = ctx_.woven();
    for (std::size_t i = 0; i < ctx_.size(); ++i) {
      const ComplexMatrix outer = w.column(i) * theta_.column(i).adjoint();
      const bool in_sigma = ctx_.sigma().contains(i);
      const Complex a = weights_ ? (*weights_)[i] : Complex(1.0);
      (in_sigma ? e_sigma_ : e_sigma_c_) += a * outer;
      if (weights_) (in_sigma ? f_sigma_ : f_sigma_c_) += (1.0 - a) * outer;
    }
  }

  WeavingContext ctx_;
  FrameFamily theta_;
  std::optional<std::vector<Complex>> weights_;
  double dual_residual_ = 0.0;
  ComplexMatrix e_sigma_;
  ComplexMatrix e_sigma_c_;
  ComplexMatrix f_sigma_;
  ComplexMatrix f_sigma_c_;
};

/// Direct sums shared by the alternate-dual theorems for one f.
struct AltDualProbe {
  Complex cross_sigma;     // sum_{sigma}   <f,theta_i> conj<f,phi_i>
  Complex cross_sigma_c;   // sum_{sigma^c} <f,theta_i> conj<f,psi_i>
  ComplexVector e_sigma_f;    // sum_{sigma}   <f,theta_i> phi_i
  ComplexVector e_sigma_c_f;  // sum_{sigma^c} <f,theta_i> psi_i
  double norm_sq_f = 0.0;
};

inline AltDualProbe probe(const AltDualContext& adc, const ComplexVector& f) {
  const WeavingContext& ctx = adc.weaving();
  if (static_cast<std::size_t>(f.size()) != ctx.dim()) {
    throw Error(ErrorCode::DimMismatch, "probe vector length differs from frame dimension");
  }
  const auto d = static_cast<Eigen::Index>(ctx.dim());
  AltDualProbe pr{{0.0, 0.0}, {0.0, 0.0}, ComplexVector::Zero(d), ComplexVector::Zero(d), norm_sq(f)};
  const FrameFamily& w = ctx.woven();
  const FrameFamily& theta = adc.theta();
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const Complex t = theta.column(i).dot(f);  // <f, theta_i>
    const Complex c = w.column(i).dot(f);      // <f, w_i>
    if (ctx.sigma().contains(i)) {
      pr.cross_sigma += t * std::conj(c);
      pr.e_sigma_f += t * w.column(i);
    } else {
      pr.cross_sigma_c += t * std::conj(c);
      pr.e_sigma_c_f += t * w.column(i);
    }
  }
  return pr;
}

/// Re(X_s) + ||E_c f||^2 = Re(X_c) + ||E_s f||^2 >= (2l - l^2) Re(X_s) + (1 - l^2) Re(X_c)
/// where X_s, X_c are the cross sums over sigma and sigma^c.
inline IdentityRecord thm_altdual_re(const AltDualContext& adc, const AltDualProbe& pr, double lambda,
                                     const Tolerances& tol = {}) {
  const double xs = pr.cross_sigma.real();
  const double xc = pr.cross_sigma_c.real();
  const double lhs = xs + norm_sq(pr.e_sigma_c_f);
  const double rhs = xc + norm_sq(pr.e_sigma_f);
  const double lower = (2.0 * lambda - lambda * lambda) * xs + (1.0 - lambda * lambda) * xc;
  IdentityRecord rec;
  rec.theorem = "altdual_re";
  rec.lambda = lambda;
  rec.sigma = adc.weaving().sigma();
  detail::add(rec, "lhs", lhs);
  detail::add(rec, "rhs", rhs);
  detail::add(rec, "lower_bound", lower);
  detail::add(rec, "re_cross_sigma", xs);
  detail::add(rec, "re_cross_sigma_c", xc);
  rec.scale = detail::scale_of({lhs, rhs, lower, xs, xc, pr.norm_sq_f});
  rec.residual = std::abs(lhs - rhs) / rec.scale;
  rec.slack = (std::min(lhs, rhs) - lower) / rec.scale;
  detail::finalize(rec, tol);
  return rec;
}

/// X_s + ||E_c f||^2 = conj(X_c) + ||E_s f||^2 (complex equality).
inline IdentityRecord thm_altdual_complex(const AltDualContext& adc, const AltDualProbe& pr,
                                          const Tolerances& tol = {}) {
  const Complex lhs = pr.cross_sigma + norm_sq(pr.e_sigma_c_f);
  const Complex rhs = std::conj(pr.cross_sigma_c) + norm_sq(pr.e_sigma_f);
  IdentityRecord rec;
  rec.theorem = "altdual_complex";
  rec.sigma = adc.weaving().sigma();
  detail::add(rec, "lhs", lhs);
  detail::add(rec, "rhs", rhs);
  rec.scale = detail::scale_of({std::abs(lhs), std::abs(rhs), std::abs(pr.cross_sigma),
                                std::abs(pr.cross_sigma_c), pr.norm_sq_f});
  rec.residual = std::abs(lhs - rhs) / rec.scale;
  detail::finalize(rec, tol);
  return rec;
}

/// Weighted identity for any bounded a_i:
///   sum_s a X + sum_c a X + ||sum_c (1-a) t psi + sum_s (1-a) t phi||^2
///   = ||sum_s a t phi + sum_c a t psi||^2 + conj(sum_s (1-a) X) + conj(sum_c (1-a) X)
/// with t = <f, theta_i> and X the per-index cross term.
inline IdentityRecord thm_altdual_weighted(const AltDualContext& adc, const ComplexVector& f,
                                           const Tolerances& tol = {}) {
  if (!adc.weights()) throw Error(ErrorCode::BadInput, "weighted identity needs weights");
  const WeavingContext& ctx = adc.weaving();
  if (static_cast<std::size_t>(f.size()) != ctx.dim()) {
    throw Error(ErrorCode::DimMismatch, "vector length differs from frame dimension");
  }
  const auto d = static_cast<Eigen::Index>(ctx.dim());
  const std::vector<Complex>& a = *adc.weights();
  Complex weighted_sigma{}, weighted_sigma_c{}, rest_sigma{}, rest_sigma_c{};
  ComplexVector weighted_synth = ComplexVector::Zero(d);
  ComplexVector rest_synth = ComplexVector::Zero(d);
  const FrameFamily& w = ctx.woven();
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const Complex t = adc.theta().column(i).dot(f);
    const Complex x = t * std::conj(w.column(i).dot(f));
    const Complex ai = a[i];
    const Complex bi = 1.0 - ai;
    if (ctx.sigma().contains(i)) {
      weighted_sigma += ai * x;
      rest_sigma += bi * x;
    } else {
      weighted_sigma_c += ai * x;
      rest_sigma_c += bi * x;
    }
    weighted_synth += (ai * t) * w.column(i);
    rest_synth += (bi * t) * w.column(i);
  }
  const Complex lhs = weighted_sigma + weighted_sigma_c + norm_sq(rest_synth);
  const Complex rhs = norm_sq(weighted_synth) + std::conj(rest_sigma) + std::conj(rest_sigma_c);

  IdentityRecord rec;
  rec.theorem = "altdual_weighted";
  rec.sigma = ctx.sigma();
  detail::add(rec, "lhs", lhs);
  detail::add(rec, "rhs", rhs);
  rec.scale = detail::scale_of({std::abs(lhs), std::abs(rhs), std::abs(weighted_sigma),
                                std::abs(weighted_sigma_c), std::abs(rest_sigma),
                                std::abs(rest_sigma_c), norm_sq(f)});
  rec.residual = std::abs(lhs - rhs) / rec.scale;
  detail::finalize(rec, tol);
  return rec;
}

inline IdentityRecord thm_altdual_re(const AltDualContext& adc, const ComplexVector& f, double lambda,
                                     const Tolerances& tol = {}) {
  return thm_altdual_re(adc, probe(adc, f), lambda, tol);
}

inline IdentityRecord thm_altdual_complex(const AltDualContext& adc, const ComplexVector& f,
                                          const Tolerances& tol = {}) {
  return thm_altdual_complex(adc, probe(adc, f), tol);
}

/// P = S_W^{-1/2} S^s S_W^{-1/2}; P + Q = I with Q built from S^c.
inline ComplexMatrix normalized_sigma_operator(const WeavingContext& ctx) {
  return ctx.inv_sqrt() * ctx.sigma_operator() * ctx.inv_sqrt();
}

}  // namespace wfl
