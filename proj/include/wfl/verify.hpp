#pragma once

// Verification driver: sweeps partitions x lambda grid x random unit
// probes, evaluates every identity record, and aggregates them into a
// self-contained Report (JSON) or a per-lambda CSV.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <future>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "wfl/error.hpp"
#include "wfl/frames.hpp"
#include "wfl/identities.hpp"
#include "wfl/io.hpp"
#include "wfl/random.hpp"
#include "wfl/weaving.hpp"

namespace wfl {

inline constexpr int kReportSchema = 1;

inline const std::vector<double>& default_lambda_grid() {
  static const std::vector<double> grid{-1.0, 0.0, 0.5, 1.0, 2.0, 3.0};
  return grid;
}

struct SigmaMode {
  bool exhaustive = true;
  std::size_t count = 0;  // sampled masks when not exhaustive

  /// "all" or "random:<k>".
  static SigmaMode parse(const std::string& text) {
    if (text == "all") return {};
    const std::string prefix = "random:";
    if (text.rfind(prefix, 0) == 0) {
      try {
        std::size_t used = 0;
        const long long k = std::stoll(text.substr(prefix.size()), &used);
        if (used == text.size() - prefix.size() && k >= 1) {
          return {false, static_cast<std::size_t>(k)};
        }
      } catch (const std::exception&) {
      }
    }
    throw Error(ErrorCode::BadInput, "sigma mode must be 'all' or 'random:<k>', got '" + text + "'");
  }

  std::string to_string() const {
    return exhaustive ? std::string("all") : "random:" + std::to_string(count);
  }
};

struct VerifyConfig {
  std::string phi_source;
  std::string psi_source;
  std::size_t trials = 20;
  std::vector<double> lambdas = default_lambda_grid();
  SigmaMode sigma_mode;
  Tolerances tol;
  std::uint64_t seed = 1;
  std::size_t max_n = kDefaultMaxN;
  unsigned workers = 1;
  /// Negative control: scale one canonical dual vector before evaluation.
  bool corrupt_dual = false;

  void validate() const {
    if (trials < 1) throw Error(ErrorCode::BadInput, "trials must be >= 1");
    if (lambdas.empty()) throw Error(ErrorCode::BadInput, "lambda grid is empty");
    for (double l : lambdas) {
      if (!std::isfinite(l)) throw Error(ErrorCode::BadInput, "lambda values must be finite");
    }
    if (!(tol.eq > 0.0) || !(tol.ineq > 0.0)) throw Error(ErrorCode::BadInput, "tolerances must be > 0");
    if (!sigma_mode.exhaustive && sigma_mode.count < 1) {
      throw Error(ErrorCode::BadInput, "random sigma mode needs k >= 1");
    }
  }
};

struct FailureWitness {
  std::uint64_t sigma = 0;
  std::optional<double> lambda;
  std::optional<std::size_t> trial;
  ComplexVector f;  // empty for operator-level records
  std::optional<double> residual;
  std::optional<double> slack;
};

struct TheoremSummary {
  std::string key;
  std::size_t count = 0;
  std::optional<double> max_residual;
  std::optional<double> min_slack;
  std::vector<FailureWitness> failures;
};

struct SweepCell {
  double lambda = 0.0;
  std::string key;
  std::size_t count = 0;
  std::optional<double> max_residual;
  std::optional<double> min_slack;
};

struct Report {
  VerifyConfig config;
  std::size_t dim = 0;
  std::size_t n = 0;
  std::optional<WovenCertificate> certificate;
  std::size_t partitions = 0;
  std::vector<TheoremSummary> theorems;  // fixed order, only keys with records
  std::vector<SweepCell> sweep;          // lambda-major, lambda-dependent keys only
  std::string generated_at;
  bool pass = true;
};

namespace detail {

enum Slot : std::size_t {
  kOperatorIdentityWeaving,
  kOperatorIdentityCanonical,
  kOperatorIdentityAlternate,
  kQuadraticBound,
  kCrossBoundCanonical,
  kCrossBoundAlternate,
  kParsevalWeaving,
  kGeneralWeaving,
  kSandwich,
  kDouble,
  kCorTight,
  kAltReCanonical,
  kAltReAlternate,
  kAltComplexCanonical,
  kAltComplexAlternate,
  kAltWeightedCanonical,
  kAltWeightedAlternate,
  kSlotCount
};

inline constexpr std::array<const char*, kSlotCount> kSlotKeys{
    "operator_identity:weaving",  "operator_identity:canonical", "operator_identity:alternate",
    "quadratic_bound",            "cross_bound:canonical",       "cross_bound:alternate",
    "parseval_weaving",           "general_weaving",             "sandwich",
    "double",                     "cor_tight",                   "altdual_re:canonical",
    "altdual_re:alternate",       "altdual_complex:canonical",   "altdual_complex:alternate",
    "altdual_weighted:canonical", "altdual_weighted:alternate",
};

inline constexpr bool lambda_dependent(std::size_t slot) {
  switch (slot) {
    case kQuadraticBound:
    case kCrossBoundCanonical:
    case kCrossBoundAlternate:
    case kGeneralWeaving:
    case kSandwich:
    case kDouble:
    case kCorTight:
    case kAltReCanonical:
    case kAltReAlternate:
      return true;
    default:
      return false;
  }
}

// Stream tags for seeded draws.
inline constexpr std::uint64_t kStreamProbe = 0x70726f6265ULL;
inline constexpr std::uint64_t kStreamDual = 0x6475616cULL;
inline constexpr std::uint64_t kStreamWeights = 0x77656967ULL;
inline constexpr std::uint64_t kStreamSigma = 0x7369676dULL;

struct Stat {
  std::size_t count = 0;
  std::optional<double> max_residual;
  std::optional<double> min_slack;

  void add(const IdentityRecord& rec) {
    ++count;
    if (rec.residual) max_residual = max_residual ? std::max(*max_residual, *rec.residual) : *rec.residual;
    if (rec.slack) min_slack = min_slack ? std::min(*min_slack, *rec.slack) : *rec.slack;
  }

  void merge(const Stat& o) {
    count += o.count;
    if (o.max_residual) max_residual = max_residual ? std::max(*max_residual, *o.max_residual) : o.max_residual;
    if (o.min_slack) min_slack = min_slack ? std::min(*min_slack, *o.min_slack) : o.min_slack;
  }
};

struct Accumulator {
  std::array<Stat, kSlotCount> slots{};
  std::array<std::vector<FailureWitness>, kSlotCount> failures{};
  std::vector<std::array<Stat, kSlotCount>> per_lambda;

  explicit Accumulator(std::size_t lambdas) : per_lambda(lambdas) {}

  void add(Slot slot, const IdentityRecord& rec, std::uint64_t sigma, std::optional<std::size_t> lambda_index,
           std::optional<std::size_t> trial, const ComplexVector* f) {
    slots[slot].add(rec);
    if (lambda_index) per_lambda[*lambda_index][slot].add(rec);
    if (!rec.pass) {
      failures[slot].push_back({sigma, rec.lambda, trial, f ? *f : ComplexVector(), rec.residual, rec.slack});
    }
  }

  void merge(Accumulator&& o) {
    for (std::size_t s = 0; s < kSlotCount; ++s) {
      slots[s].merge(o.slots[s]);
      for (auto& w : o.failures[s]) failures[s].push_back(std::move(w));
      for (std::size_t l = 0; l < per_lambda.size(); ++l) per_lambda[l][s].merge(o.per_lambda[l][s]);
    }
  }
};

inline std::vector<std::uint64_t> select_partitions(std::size_t n, const VerifyConfig& cfg) {
  std::vector<std::uint64_t> out;
  if (cfg.sigma_mode.exhaustive) {
    if (n > cfg.max_n || n >= 63) {
      throw Error(ErrorCode::TooLarge, "exhaustive sigma mode needs n <= max_n = " + std::to_string(cfg.max_n));
    }
    const std::uint64_t total = std::uint64_t{1} << n;
    out.reserve(total);
    for (std::uint64_t b = 0; b < total; ++b) out.push_back(b);
    return out;
  }
  const std::uint64_t mask = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  const std::uint64_t available = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n);
  const std::uint64_t wanted = std::min<std::uint64_t>(cfg.sigma_mode.count, available);
  Rng rng = make_rng(cfg.seed, {kStreamSigma});
  std::set<std::uint64_t> chosen;
  while (chosen.size() < wanted) chosen.insert(rng() & mask);
  return {chosen.begin(), chosen.end()};
}

inline std::vector<Complex> random_weights(std::uint64_t seed, std::uint64_t sigma, std::size_t n) {
  Rng rng = make_rng(seed, {kStreamWeights, sigma});
  std::vector<Complex> a(n);
  for (auto& v : a) v = Complex(0.5, 0.0) + complex_gaussian(rng);
  return a;
}

inline void evaluate_partition(const FrameFamily& phi, const FrameFamily& psi, std::uint64_t bits,
                               const VerifyConfig& cfg, Accumulator& acc) {
  const std::size_t n = phi.size();
  const PartitionMask sigma(n, bits);
  const WeavingContext ctx(phi, psi, sigma);
  const Tolerances& tol = cfg.tol;

  const ComplexMatrix p = normalized_sigma_operator(ctx);
  acc.add(kOperatorIdentityWeaving, lemma_operator_identity(p, tol), bits, std::nullopt, std::nullopt, nullptr);

  const bool parseval = ctx.is_parseval();
  const std::optional<double> tight = ctx.tight_constant();

  // Dual variants: canonical always, random alternate when n > d.
  struct Variant {
    AltDualContext adc;
    Slot identity, cross, re, complex, weighted;
  };
  std::vector<Variant> variants;
  {
    FrameFamily canonical = canonical_weaving_dual(ctx);
    auto weights = random_weights(cfg.seed, bits, n);
    if (cfg.corrupt_dual) {
      ComplexMatrix m = canonical.matrix();
      m.col(0) *= 1.5;
      variants.push_back({AltDualContext::make_unvalidated(ctx, FrameFamily(std::move(m)), weights),
                          kOperatorIdentityCanonical, kCrossBoundCanonical, kAltReCanonical, kAltComplexCanonical,
                          kAltWeightedCanonical});
    } else {
      variants.push_back({AltDualContext::make(ctx, std::move(canonical), weights), kOperatorIdentityCanonical,
                          kCrossBoundCanonical, kAltReCanonical, kAltComplexCanonical, kAltWeightedCanonical});
    }
    if (n > phi.dim()) {
      Rng dual_seed = make_rng(cfg.seed, {kStreamDual, bits});
      variants.push_back({AltDualContext::make(ctx, random_alternate_dual(ctx, dual_seed()), weights),
                          kOperatorIdentityAlternate, kCrossBoundAlternate, kAltReAlternate, kAltComplexAlternate,
                          kAltWeightedAlternate});
    }
  }
  for (const auto& v : variants) {
    acc.add(v.identity, lemma_operator_identity(v.adc.e_sigma(), tol), bits, std::nullopt, std::nullopt, nullptr);
  }

  const auto d = static_cast<Eigen::Index>(phi.dim());
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    Rng rng = make_rng(cfg.seed, {kStreamProbe, bits, trial});
    const ComplexVector f = random_unit_vector(rng, d);
    const WeavingProbe pr = probe(ctx, f);
    const ComplexVector g = ctx.sqrt() * f;

    if (parseval) acc.add(kParsevalWeaving, thm_parseval_weaving(pr, tol), bits, std::nullopt, trial, &f);

    std::vector<AltDualProbe> dual_probes;
    dual_probes.reserve(variants.size());
    for (const auto& v : variants) {
      dual_probes.push_back(probe(v.adc, f));
      acc.add(v.complex, thm_altdual_complex(v.adc, dual_probes.back(), tol), bits, std::nullopt, trial, &f);
      acc.add(v.weighted, thm_altdual_weighted(v.adc, f, tol), bits, std::nullopt, trial, &f);
    }

    for (std::size_t li = 0; li < cfg.lambdas.size(); ++li) {
      const double lambda = cfg.lambdas[li];
      acc.add(kQuadraticBound, lemma_quadratic_bound(p, g, lambda, tol), bits, li, trial, &f);
      acc.add(kGeneralWeaving, thm_general_weaving(pr, lambda, tol), bits, li, trial, &f);
      acc.add(kSandwich, thm_sandwich(pr, lambda, tol), bits, li, trial, &f);
      acc.add(kDouble, thm_double(pr, lambda, tol), bits, li, trial, &f);
      if (tight) acc.add(kCorTight, cor_tight(pr, lambda, *tight, tol), bits, li, trial, &f);
      for (std::size_t vi = 0; vi < variants.size(); ++vi) {
        const auto& v = variants[vi];
        acc.add(v.cross, lemma_cross_bound(v.adc.e_sigma(), f, lambda, tol), bits, li, trial, &f);
        acc.add(v.re, thm_altdual_re(v.adc, dual_probes[vi], lambda, tol), bits, li, trial, &f);
      }
    }
  }
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

/// Runs the full verification. Throws Error for precondition failures
/// (bad config, shape mismatch, not woven, too large); record failures are
/// reported through Report::pass.
inline Report run_verify(const VerifyConfig& cfg, const FrameFamily& phi, const FrameFamily& psi) {
  cfg.validate();
  detail::require_same_shape(phi, psi);

  Report report;
  report.config = cfg;
  report.dim = phi.dim();
  report.n = phi.size();
  report.generated_at = detail::utc_timestamp();

  if (phi.size() <= cfg.max_n) {
    report.certificate = woven_bounds_bruteforce(phi, psi, cfg.max_n, cfg.workers);
  } else if (cfg.sigma_mode.exhaustive) {
    throw Error(ErrorCode::TooLarge, "n = " + std::to_string(phi.size()) + " exceeds max_n");
  }

  const std::vector<std::uint64_t> partitions = detail::select_partitions(phi.size(), cfg);
  report.partitions = partitions.size();

  const std::size_t workers = std::clamp<std::size_t>(cfg.workers, 1, std::max<std::size_t>(1, partitions.size()));
  auto run_range = [&](std::size_t begin, std::size_t end) {
    detail::Accumulator acc(cfg.lambdas.size());
    for (std::size_t k = begin; k < end; ++k) detail::evaluate_partition(phi, psi, partitions[k], cfg, acc);
    return acc;
  };

  detail::Accumulator total(cfg.lambdas.size());
  if (workers == 1) {
    total = run_range(0, partitions.size());
  } else {
    std::vector<std::future<detail::Accumulator>> pending;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = partitions.size() * w / workers;
      const std::size_t end = partitions.size() * (w + 1) / workers;
      pending.push_back(std::async(std::launch::async, run_range, begin, end));
    }
    for (auto& p : pending) total.merge(p.get());
  }

  for (std::size_t s = 0; s < detail::kSlotCount; ++s) {
    const detail::Stat& st = total.slots[s];
    if (st.count == 0) continue;
    TheoremSummary summary{detail::kSlotKeys[s], st.count, st.max_residual, st.min_slack, std::move(total.failures[s])};
    std::sort(summary.failures.begin(), summary.failures.end(), [](const FailureWitness& a, const FailureWitness& b) {
      return std::tie(a.sigma, a.lambda, a.trial) < std::tie(b.sigma, b.lambda, b.trial);
    });
    if (!summary.failures.empty()) report.pass = false;
    report.theorems.push_back(std::move(summary));
  }
  for (std::size_t li = 0; li < cfg.lambdas.size(); ++li) {
    for (std::size_t s = 0; s < detail::kSlotCount; ++s) {
      const detail::Stat& st = total.per_lambda[li][s];
      if (!detail::lambda_dependent(s) || st.count == 0) continue;
      report.sweep.push_back({cfg.lambdas[li], detail::kSlotKeys[s], st.count, st.max_residual, st.min_slack});
    }
  }
  return report;
}

inline const TheoremSummary* find_summary(const Report& report, const std::string& key) {
  for (const auto& t : report.theorems) {
    if (t.key == key) return &t;
  }
  return nullptr;
}

inline Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

inline Json config_to_json(const VerifyConfig& cfg) {
  return Json{{"phi", cfg.phi_source},
              {"psi", cfg.psi_source},
              {"trials", cfg.trials},
              {"lambdas", cfg.lambdas},
              {"sigma_mode", cfg.sigma_mode.to_string()},
              {"tol_eq", cfg.tol.eq},
              {"tol_ineq", cfg.tol.ineq},
              {"seed", cfg.seed},
              {"max_n", cfg.max_n},
              {"corrupt_dual", cfg.corrupt_dual}};
}

inline Json report_to_json(const Report& report) {
  Json theorems = Json::array();
  for (const auto& t : report.theorems) {
    Json failures = Json::array();
    for (const auto& w : t.failures) {
      failures.push_back(Json{{"sigma", w.sigma},
                              {"lambda", optional_to_json(w.lambda)},
                              {"trial", w.trial ? Json(*w.trial) : Json(nullptr)},
                              {"f", vector_to_json(w.f)},
                              {"residual", optional_to_json(w.residual)},
                              {"slack", optional_to_json(w.slack)}});
    }
    theorems.push_back(Json{{"theorem", t.key},
                            {"count", t.count},
                            {"max_residual", optional_to_json(t.max_residual)},
                            {"min_slack", optional_to_json(t.min_slack)},
                            {"failures", std::move(failures)}});
  }
  const bool complete = report.config.sigma_mode.exhaustive;
  return Json{{"schema", kReportSchema},
              {"generated_at", report.generated_at},
              {"rng", kRngDescription},
              {"config", config_to_json(report.config)},
              {"frames", Json{{"dim", report.dim}, {"count", report.n}}},
              {"certificate", report.certificate ? certificate_to_json(*report.certificate) : Json(nullptr)},
              {"sigma_sampling", Json{{"mode", report.config.sigma_mode.to_string()},
                                      {"partitions", report.partitions},
                                      {"complete", complete},
                                      {"note", complete ? "every partition evaluated"
                                                        : "sampled partitions only; the statements quantify "
                                                          "over all partitions"}}},
              {"theorems", std::move(theorems)},
              {"pass", report.pass}};
}

namespace detail {

inline std::string csv_number(const std::optional<double>& v) {
  if (!v) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

}  // namespace detail

inline constexpr const char* kSweepCsvHeader = "lambda,theorem,min_slack,max_residual,trials";

inline std::string sweep_to_csv(const Report& report) {
  std::ostringstream out;
  out << kSweepCsvHeader << "\n";
  for (const auto& cell : report.sweep) {
    out << detail::csv_number(cell.lambda) << "," << cell.key << "," << detail::csv_number(cell.min_slack) << ","
        << detail::csv_number(cell.max_residual) << "," << cell.count << "\n";
  }
  return out.str();
}

}  // namespace wfl
