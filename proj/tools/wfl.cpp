// wfl: weaving-frame laboratory command line.
//
//   wfl gen          --kind K --dim d --count n [--seed s] [--epsilon e] -o FILE [--psi-out FILE]
//   wfl inspect      FILE
//   wfl woven-check  A B [--max-n 14]
//   wfl verify       (--phi FILE [--psi FILE] | --kind K ...) [--trials t] [--lambdas l1,l2,...]
//                    [--sigma-mode all|random:k] [--tol-eq x] [--tol-ineq x] [--report FILE]
//   wfl sweep-lambda (same inputs as verify) [-o FILE.csv]
//
// Exit codes: 0 success, 1 a check failed (not woven / record failure), 2 bad input.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wfl/wfl.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitBadInput = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("WFL_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw wfl::Error(wfl::ErrorCode::BadInput, std::string("WFL_SEED is not an integer: ") + env);
    }
  }
  return 1;
}

std::vector<double> parse_lambdas(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw wfl::Error(wfl::ErrorCode::BadInput, "bad lambda value '" + item + "'");
    }
  }
  return out;
}

struct GenOptions {
  std::string kind = "random";
  std::size_t dim = 2;
  std::size_t count = 4;
  std::optional<std::uint64_t> seed;
  double epsilon = 0.1;
  std::size_t max_n = wfl::kDefaultMaxN;

  void attach(CLI::App* app) {
    app->add_option("--kind", kind, "onb | random | dft | mercedes | woven_pair");
    app->add_option("--dim", dim, "ambient dimension d");
    app->add_option("--count", count, "number of vectors n");
    app->add_option("--seed", seed, "RNG seed (default: $WFL_SEED or 1)");
    app->add_option("--epsilon", epsilon, "perturbation radius for woven_pair");
    app->add_option("--max-n", max_n, "brute-force partition limit");
  }

  wfl::GenSpec spec() const {
    wfl::GenSpec s;
    s.kind = wfl::parse_gen_kind(kind);
    s.dim = dim;
    s.count = count;
    s.seed = seed ? *seed : default_seed();
    s.epsilon = epsilon;
    s.validate();
    return s;
  }

  std::string describe() const {
    const wfl::GenSpec s = spec();
    std::ostringstream out;
    out << "gen:" << wfl::to_string(s.kind) << " dim=" << s.dim << " count=" << s.count << " seed=" << s.seed;
    if (s.kind == wfl::GenKind::WovenPair) out << " epsilon=" << s.epsilon;
    return out.str();
  }
};

/// Generates phi (and psi for woven_pair; otherwise psi = phi).
std::pair<wfl::FrameFamily, wfl::FrameFamily> generate(const GenOptions& opts,
                                                       std::optional<wfl::WovenCertificate>* cert = nullptr) {
  const wfl::GenSpec s = opts.spec();
  switch (s.kind) {
    case wfl::GenKind::Onb: {
      auto f = wfl::gen_onb(s.dim);
      return {f, f};
    }
    case wfl::GenKind::Dft: {
      auto f = wfl::gen_dft(s.dim, s.count);
      return {f, f};
    }
    case wfl::GenKind::Mercedes: {
      auto f = wfl::gen_mercedes();
      return {f, f};
    }
    case wfl::GenKind::Random: {
      auto f = wfl::gen_random(s.dim, s.count, s.seed);
      return {f, f};
    }
    case wfl::GenKind::WovenPair: {
      auto pair = wfl::gen_woven_pair(s.dim, s.count, s.epsilon, s.seed, opts.max_n);
      if (cert) *cert = pair.certificate;
      return {pair.phi, pair.psi};
    }
  }
  throw wfl::Error(wfl::ErrorCode::BadInput, "unhandled generator kind");
}

struct VerifyOptions {
  GenOptions gen;
  std::string phi_path;
  std::string psi_path;
  std::size_t trials = 20;
  std::string lambdas = "-1,0,0.5,1,2,3";
  std::string sigma_mode = "all";
  double tol_eq = 1e-9;
  double tol_ineq = 1e-9;
  std::string report_path;
  unsigned jobs = 1;
  bool corrupt_dual = false;

  void attach(CLI::App* app) {
    gen.attach(app);
    app->add_option("--phi", phi_path, "frame JSON for phi (otherwise generated from --kind)");
    app->add_option("--psi", psi_path, "frame JSON for psi (default: same as phi)");
    app->add_option("--trials", trials, "random unit probes per partition");
    app->add_option("--lambdas", lambdas, "comma-separated lambda grid");
    app->add_option("--sigma-mode", sigma_mode, "all | random:<k>");
    app->add_option("--tol-eq", tol_eq, "relative equality tolerance");
    app->add_option("--tol-ineq", tol_ineq, "relative inequality tolerance");
    app->add_option("--report", report_path, "write the JSON report here");
    app->add_option("--jobs", jobs, "worker threads (result is independent of this)");
    app->add_flag("--debug-corrupt-dual", corrupt_dual, "negative control: corrupt the canonical dual");
  }

  wfl::VerifyConfig config() const {
    wfl::VerifyConfig cfg;
    cfg.trials = trials;
    cfg.lambdas = parse_lambdas(lambdas);
    cfg.sigma_mode = wfl::SigmaMode::parse(sigma_mode);
    cfg.tol = {tol_eq, tol_ineq};
    cfg.seed = gen.seed ? *gen.seed : default_seed();
    cfg.max_n = gen.max_n;
    cfg.workers = jobs == 0 ? 1 : jobs;
    cfg.corrupt_dual = corrupt_dual;
    return cfg;
  }

  std::pair<wfl::FrameFamily, wfl::FrameFamily> frames(wfl::VerifyConfig& cfg) const {
    if (!phi_path.empty()) {
      wfl::FrameFamily phi = wfl::read_frame_file(phi_path);
      wfl::FrameFamily psi = psi_path.empty() ? phi : wfl::read_frame_file(psi_path);
      cfg.phi_source = phi_path;
      cfg.psi_source = psi_path.empty() ? phi_path : psi_path;
      return {phi, psi};
    }
    cfg.phi_source = cfg.psi_source = gen.describe();
    return generate(gen);
  }
};

void print_error(const wfl::Error& e) {
  std::cerr << "error: " << e.what();
  if (e.witness()) std::cerr << " (witness sigma=" << *e.witness() << ")";
  std::cerr << "\n";
}

int cmd_gen(const GenOptions& opts, const std::string& out, const std::string& psi_out) {
  std::optional<wfl::WovenCertificate> cert;
  auto [phi, psi] = generate(opts, &cert);
  const std::string text = wfl::frame_to_json(phi).dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    wfl::write_text_file(out, text);
  }
  if (cert) {
    if (!psi_out.empty()) wfl::write_frame_file(psi_out, psi);
    std::cerr << wfl::certificate_to_json(*cert).dump() << "\n";
  }
  return kExitOk;
}

int cmd_inspect(const std::string& path) {
  const wfl::FrameFamily frame = wfl::read_frame_file(path);
  wfl::Json out{{"dim", frame.dim()}, {"count", frame.size()}};
  try {
    const wfl::FrameBounds b = wfl::frame_bounds(frame);
    const bool tight = b.upper - b.lower <= 1e-12 * std::max(1.0, b.upper);
    out["frame"] = true;
    out["lower"] = b.lower;
    out["upper"] = b.upper;
    out["tight"] = tight;
    out["parseval"] = tight && std::abs(b.lower - 1.0) <= 1e-12 && std::abs(b.upper - 1.0) <= 1e-12;
  } catch (const wfl::Error& e) {
    if (e.code() != wfl::ErrorCode::NotAFrame) throw;
    out["frame"] = false;
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_woven_check(const std::string& a, const std::string& b, std::size_t max_n, unsigned jobs) {
  const wfl::FrameFamily phi = wfl::read_frame_file(a);
  const wfl::FrameFamily psi = wfl::read_frame_file(b);
  try {
    const wfl::WovenCertificate cert = wfl::woven_bounds_bruteforce(phi, psi, max_n, jobs == 0 ? 1 : jobs);
    wfl::Json out = wfl::certificate_to_json(cert);
    out["woven"] = true;
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  } catch (const wfl::Error& e) {
    if (e.code() != wfl::ErrorCode::NotWoven) throw;
    std::cout << wfl::Json{{"woven", false}, {"witness", e.witness().value_or(0)}}.dump(2) << "\n";
    return kExitFail;
  }
}

void print_summary(const wfl::Report& report) {
  for (const auto& t : report.theorems) {
    std::cerr << (t.failures.empty() ? "ok   " : "FAIL ") << t.key << "  count=" << t.count;
    if (t.max_residual) std::cerr << "  max_residual=" << *t.max_residual;
    if (t.min_slack) std::cerr << "  min_slack=" << *t.min_slack;
    if (!t.failures.empty()) std::cerr << "  failures=" << t.failures.size();
    std::cerr << "\n";
  }
  std::cerr << (report.pass ? "PASS" : "FAIL") << "\n";
}

int cmd_verify(const VerifyOptions& opts) {
  wfl::VerifyConfig cfg = opts.config();
  auto [phi, psi] = opts.frames(cfg);
  const wfl::Report report = wfl::run_verify(cfg, phi, psi);
  const std::string json = wfl::report_to_json(report).dump(2) + "\n";
  if (!opts.report_path.empty()) {
    wfl::write_text_file(opts.report_path, json);
  } else {
    std::cout << json;
  }
  print_summary(report);
  return report.pass ? kExitOk : kExitFail;
}

int cmd_sweep(const VerifyOptions& opts, const std::string& out) {
  wfl::VerifyConfig cfg = opts.config();
  auto [phi, psi] = opts.frames(cfg);
  const wfl::Report report = wfl::run_verify(cfg, phi, psi);
  const std::string csv = wfl::sweep_to_csv(report);
  if (out.empty() || out == "-") {
    std::cout << csv;
  } else {
    wfl::write_text_file(out, csv);
  }
  if (!opts.report_path.empty()) wfl::write_text_file(opts.report_path, wfl::report_to_json(report).dump(2) + "\n");
  return report.pass ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weaving-frame laboratory"};
  app.require_subcommand(1);

  GenOptions gen_opts;
  std::string gen_out;
  std::string gen_psi_out;
  auto* gen = app.add_subcommand("gen", "generate a frame (or a certified woven pair) as JSON");
  gen_opts.attach(gen);
  gen->add_option("-o,--out", gen_out, "output path (default stdout)");
  gen->add_option("--psi-out", gen_psi_out, "output path for psi (woven_pair only)");

  std::string inspect_path;
  auto* inspect = app.add_subcommand("inspect", "print dimension, size and frame bounds");
  inspect->add_option("file", inspect_path)->required();

  std::string woven_a, woven_b;
  std::size_t woven_max_n = wfl::kDefaultMaxN;
  unsigned woven_jobs = 1;
  auto* woven = app.add_subcommand("woven-check", "certify woven-ness by exhaustive partition sweep");
  woven->add_option("a", woven_a)->required();
  woven->add_option("b", woven_b)->required();
  woven->add_option("--max-n", woven_max_n, "brute-force partition limit");
  woven->add_option("--jobs", woven_jobs, "worker threads");

  VerifyOptions verify_opts;
  auto* verify = app.add_subcommand("verify", "evaluate every identity over partitions, lambdas and probes");
  verify_opts.attach(verify);

  VerifyOptions sweep_opts;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep-lambda", "per-lambda minimum slack table (CSV)");
  sweep_opts.attach(sweep);
  sweep->add_option("-o,--out", sweep_out, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (*gen) return cmd_gen(gen_opts, gen_out, gen_psi_out);
    if (*inspect) return cmd_inspect(inspect_path);
    if (*woven) return cmd_woven_check(woven_a, woven_b, woven_max_n, woven_jobs);
    if (*verify) return cmd_verify(verify_opts);
    if (*sweep) return cmd_sweep(sweep_opts, sweep_out);
  } catch (const wfl::Error& e) {
    print_error(e);
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
