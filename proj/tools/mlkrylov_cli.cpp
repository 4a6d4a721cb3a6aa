// Benchmark driver for the multi-shadow stabilized Krylov solvers.
//
// Exit codes: 0 converged, 1 stagnated at the iteration cap, 2 breakdown,
// 3 usage or I/O failure. Sweep mode writes its CSV to stdout and exits 0
// when every row converged, 1 otherwise.

#include <complex>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mlk/harness.hpp"

namespace {

struct Options {
  std::string matrix;
  std::string rhs;
  std::string variant = "a";
  int n = 1;
  double tol = 1e-7;
  int max_it = 0;  // 0: 3N, resolved at solve time
  double kappa = 0.0;
  std::string precond = "ilu0";
  std::string shadow = "randn";
  std::uint64_t seed = 0;
  std::string history;
  std::string sweep;  // "LO..HI"
  std::string baseline;
  bool counts = false;
};

mlk::ShadowMode shadow_mode(const std::string& name, bool complex_data) {
  if (name == "randn") return complex_data ? mlk::ShadowMode::complex_randn_r0
                                           : mlk::ShadowMode::randn_r0;
  if (name == "sign") return complex_data ? mlk::ShadowMode::complex_sign_r0
                                          : mlk::ShadowMode::sign_r0;
  if (name == "crandn") return mlk::ShadowMode::complex_randn_r0;
  if (name == "csign") return mlk::ShadowMode::complex_sign_r0;
  if (name == "fom") return mlk::ShadowMode::adaptive_fom;
  throw mlk::ConfigurationError("unknown shadow mode: " + name);
}

bool parse_range(const std::string& s, int& lo, int& hi) {
  const auto pos = s.find("..");
  if (pos == std::string::npos) return false;
  try {
    lo = std::stoi(s.substr(0, pos));
    hi = std::stoi(s.substr(pos + 2));
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

template <class S>
int run(const Options& opt, const mlk::MmData& md) {
  using namespace mlk;
  CsrMatrix<S> A = mm_to_csr<S>(md);
  DenseVector<S> b = load_rhs_or_default<S>(A, opt.rhs);

  RunSpec spec;
  spec.cfg.n = opt.n;
  spec.cfg.tol = opt.tol;
  spec.cfg.max_it = opt.max_it;
  spec.cfg.kappa = opt.kappa;
  spec.cfg.seed = opt.seed;
  spec.cfg.shadow = shadow_mode(opt.shadow, scalar_traits<S>::is_complex);
  spec.precond = (opt.precond == "none") ? PrecondChoice::none : PrecondChoice::ilu0;
  spec.history_path = opt.history;
  if (!opt.baseline.empty()) {
    spec.method = Method::bicgstab;
  } else if (opt.variant == "b") {
    spec.method = Method::variant_b;
    spec.cfg.variant = Variant::B;
  } else {
    spec.method = Method::variant_a;
  }

  if (!opt.sweep.empty()) {
    int lo = 0, hi = 0;
    if (!parse_range(opt.sweep, lo, hi) || lo < 1 || hi < lo) {
      std::cerr << "bad --sweep range, expected LO..HI with 1 <= LO <= HI\n";
      return 3;
    }
    auto rows = sweep_n(A, b, spec, lo, hi);
    write_sweep_csv(std::cout, rows);
    for (const auto& row : rows)
      if (row.flag != 0) return 1;
    return 0;
  }

  auto res = run_single(A, b, spec);
  if (spec.precond == PrecondChoice::ilu0) {
    std::fprintf(stderr, "factorization: %.6f s", res.factor_seconds);
    if (res.zero_pivot_replacements > 0)
      std::fprintf(stderr, " (%lld zero pivots replaced)",
                   static_cast<long long>(res.zero_pivot_replacements));
    std::fprintf(stderr, "\n");
  }
  const auto& out = res.outcome;
  std::printf("flag %d iter %lld relres %.6e true_relres %.6e matvecs %lld seconds %.6f\n",
              static_cast<int>(out.flag), static_cast<long long>(out.iter), out.err,
              res.true_relres,
              static_cast<long long>(out.counters.matvec_A + out.counters.matvec_AH),
              res.solve_seconds);
  if (out.flag == SolveFlag::breakdown && !out.breakdown_reason.empty())
    std::fprintf(stderr, "breakdown: %s\n", out.breakdown_reason.c_str());

  if (opt.counts) {
    try {
      auto rep = count_report(out, spec.cfg);
      std::printf("counts per iteration over %ld steady cycles:\n", rep.cycles);
      std::printf("  matvec  %.4f (expected %.4f) %s\n", rep.matvec_per_iter,
                  rep.expected_matvec, rep.matvec_ok ? "ok" : "MISMATCH");
      std::printf("  precond %.4f (expected %.4f) %s\n", rep.precond_per_iter,
                  rep.expected_precond, rep.precond_ok ? "ok" : "MISMATCH");
      std::printf("  dot     %.4f (expected %.4f) %s\n", rep.dot_per_iter, rep.expected_dot,
                  rep.dot_ok ? "ok" : "MISMATCH");
      std::printf("  axpy    %.4f (expected %.4f) %s\n", rep.axpy_per_iter, rep.expected_axpy,
                  rep.axpy_ok ? "ok" : "MISMATCH");
    } catch (const InsufficientDataError& e) {
      std::fprintf(stderr, "counts unavailable: %s\n", e.what());
    }
  }

  switch (out.flag) {
    case SolveFlag::converged:
      return 0;
    case SolveFlag::no_convergence:
      return 1;
    case SolveFlag::breakdown:
      return 2;
  }
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Sparse linear solves with multi-shadow stabilized Krylov methods"};
  app.add_option("--matrix", opt.matrix, "Matrix Market file (required)")->required();
  app.add_option("--rhs", opt.rhs, "right-hand side file; default b = A*ones");
  app.add_option("--variant", opt.variant, "solver variant")
      ->check(CLI::IsMember({"a", "b"}));
  app.add_option("--n", opt.n, "number of shadow vectors")->check(CLI::PositiveNumber);
  app.add_option("--tol", opt.tol, "relative residual tolerance");
  app.add_option("--max-it", opt.max_it, "iteration cap, 0 means 3N");
  app.add_option("--kappa", opt.kappa, "scalar safeguard threshold, 0 disables");
  app.add_option("--precond", opt.precond, "preconditioner")
      ->check(CLI::IsMember({"none", "ilu0"}));
  app.add_option("--shadow", opt.shadow, "shadow vector generation")
      ->check(CLI::IsMember({"randn", "sign", "crandn", "csign", "fom"}));
  app.add_option("--seed", opt.seed, "RNG seed for shadow vectors");
  app.add_option("--history", opt.history, "write per-iteration convergence CSV here");
  app.add_option("--sweep", opt.sweep, "run each n in LO..HI, CSV to stdout");
  app.add_option("--baseline", opt.baseline, "run the baseline solver instead")
      ->check(CLI::IsMember({"bicgstab"}));
  app.add_flag("--counts", opt.counts, "print the per-iteration operation counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  try {
    mlk::MmData md = mlk::parse_matrix_market_file(opt.matrix);
    return md.is_complex() ? run<std::complex<double>>(opt, md) : run<double>(opt, md);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
