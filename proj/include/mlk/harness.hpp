#ifndef MLK_HARNESS_HPP
#define MLK_HARNESS_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlk/csr.hpp"
#include "mlk/dense.hpp"
#include "mlk/mm_io.hpp"
#include "mlk/oracle.hpp"
#include "mlk/precond.hpp"
#include "mlk/solver_types.hpp"
#include "mlk/solvers/bicgstab.hpp"
#include "mlk/solvers/mlbicgstab_a.hpp"
#include "mlk/solvers/mlbicgstab_b.hpp"

namespace mlk {

enum class PrecondChoice { none, ilu0 };
enum class Method { variant_a, variant_b, bicgstab };

class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ||b - A x|| / ||b|| with the zero-rhs fallback.
template <class S>
double true_relative_error(const CsrMatrix<S>& A, const DenseVector<S>& x,
                           const DenseVector<S>& b) {
  DenseVector<S> r = spmv(A, x);
  set_sub(r, b, r);
  return residual_check(norm2(r), norm2(b), 0.0).relres;
}

struct RunSpec {
  SolverConfig cfg;
  Method method = Method::variant_a;
  PrecondChoice precond = PrecondChoice::ilu0;
  std::string history_path;  // empty: no history file
};

template <class S>
struct RunResult {
  SolverOutcome<S> outcome;
  double true_relres = 0.0;
  double solve_seconds = 0.0;
  double factor_seconds = 0.0;
  std::int64_t zero_pivot_replacements = 0;
};

inline void write_history_csv(std::ostream& os, const std::vector<ConvergenceRecord>& hist) {
  os << "k,relres,true_relres,matvecs,precond_applies,wall_ns\n";
  os.precision(17);
  for (const auto& rec : hist) {
    os << rec.k << ',' << rec.relres << ',' << rec.true_relres << ',' << rec.matvecs << ','
       << rec.precond_applies << ',' << rec.wall_ns << '\n';
  }
}

/// Recomputes the true relative residual for every history row from the
/// traced iterates.
template <class S>
void fill_true_relres(std::vector<ConvergenceRecord>& hist, const SolveTrace<S>& trace,
                      const CsrMatrix<S>& A, const DenseVector<S>& b) {
  const std::size_t m = std::min(hist.size(), trace.ks.size());
  for (std::size_t i = 0; i < m; ++i) {
    if (trace.ks[i] != hist[i].k) continue;
    hist[i].true_relres = true_relative_error(A, trace.x[i], b);
  }
}

/// One solve with the requested method and preconditioner; wall time covers
/// the solver loop only, factorization is timed separately.
template <class S>
RunResult<S> run_single(const CsrMatrix<S>& A, const DenseVector<S>& b, const RunSpec& spec) {
  using clock = std::chrono::steady_clock;
  RunResult<S> res;
  Preconditioner<S> M = Preconditioner<S>::identity();
  if (spec.precond == PrecondChoice::ilu0) {
    const auto f0 = clock::now();
    M = ilu0_factor(A);
    res.factor_seconds = std::chrono::duration<double>(clock::now() - f0).count();
    res.zero_pivot_replacements = M.zero_pivot_replacements;
  }
  const DenseVector<S> x0(b.size(), S{});
  const bool want_history = !spec.history_path.empty();
  SolveTrace<S> trace;
  SolveTrace<S>* tp = want_history ? &trace : nullptr;

  const auto s0 = clock::now();
  switch (spec.method) {
    case Method::variant_a:
      res.outcome = mlbicgstab_a_solve(A, b, x0, spec.cfg, M, tp);
      break;
    case Method::variant_b:
      res.outcome = mlbicgstab_b_solve(A, b, x0, spec.cfg, M, tp);
      break;
    case Method::bicgstab:
      res.outcome = bicgstab_solve(A, b, x0, spec.cfg, M);
      break;
  }
  res.solve_seconds = std::chrono::duration<double>(clock::now() - s0).count();
  res.true_relres = true_relative_error(A, res.outcome.x, b);

  if (want_history) {
    if (spec.method != Method::bicgstab) fill_true_relres(res.outcome.history, trace, A, b);
    std::ofstream out(spec.history_path);
    if (!out) throw IoError("cannot write history file: " + spec.history_path);
    write_history_csv(out, res.outcome.history);
  }
  return res;
}

/// File-based entry: loads the matrix and right-hand side (b = A*ones when
/// no rhs path is given) and runs run_single.
template <class S>
RunResult<S> run_single_file(const std::string& matrix_path, const std::string& rhs_path,
                             const RunSpec& spec) {
  MmData md = parse_matrix_market_file(matrix_path);
  CsrMatrix<S> A = mm_to_csr<S>(md);
  DenseVector<S> b = load_rhs_or_default<S>(A, rhs_path);
  return run_single(A, b, spec);
}

struct SweepRow {
  int n = 0;
  std::int64_t iters = 0;
  double seconds = 0.0;
  double true_relres = 0.0;
  std::int64_t matvecs = 0;
  int flag = 0;
};

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "n,iters,seconds,true_relres,matvecs,flag\n";
  os.precision(17);
  for (const auto& row : rows) {
    os << row.n << ',' << row.iters << ',' << row.seconds << ',' << row.true_relres << ','
       << row.matvecs << ',' << row.flag << '\n';
  }
}

/// Independent solves for each n in [lo, hi]; failures are recorded per row
/// (flag 3 for configuration or setup exceptions) and the sweep continues.
template <class S>
std::vector<SweepRow> sweep_n(const CsrMatrix<S>& A, const DenseVector<S>& b, RunSpec spec,
                              int lo, int hi) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("sweep: bad n range");
  std::vector<SweepRow> rows;
  for (int n = lo; n <= hi; ++n) {
    spec.cfg.n = n;
    SweepRow row;
    row.n = n;
    try {
      RunResult<S> res = run_single(A, b, spec);
      row.iters = res.outcome.iter;
      row.seconds = res.solve_seconds;
      row.true_relres = res.true_relres;
      row.matvecs = res.outcome.counters.matvec_A + res.outcome.counters.matvec_AH;
      row.flag = static_cast<int>(res.outcome.flag);
    } catch (const std::exception&) {
      row.flag = 3;
    }
    rows.push_back(row);
  }
  return rows;
}

struct CountReport {
  long cycles = 0;
  double matvec_per_iter = 0, precond_per_iter = 0, dot_per_iter = 0, axpy_per_iter = 0;
  double expected_matvec = 0, expected_precond = 0, expected_dot = 0, expected_axpy = 0;
  bool matvec_ok = false, precond_ok = false, dot_ok = false, axpy_ok = false;
  bool ok() const { return matvec_ok && precond_ok && dot_ok && axpy_ok; }
};

/// Steady-state per-iteration cost, measured as counter deltas between the
/// end of the first cycle and the last complete cycle. Matvec and
/// preconditioner applications must match the contract exactly; dot and
/// axpy counts get a slack of 2 per iteration against the reference
/// formulas.
template <class S>
CountReport count_report(const SolverOutcome<S>& out, const SolverConfig& cfg) {
  const long n = cfg.n;
  if (out.history.empty() || out.history.size() != out.counter_history.size())
    throw InsufficientDataError("count_report: run lacks counter snapshots");
  const std::int64_t last_k = out.history.back().k;
  const std::int64_t K = (last_k / n) * n;
  if (K < 2 * n) throw InsufficientDataError("count_report: need at least two full cycles");
  auto find_idx = [&](std::int64_t k) {
    for (std::size_t i = 0; i < out.history.size(); ++i)
      if (out.history[i].k == k) return i;
    throw InsufficientDataError("count_report: incomplete history");
  };
  const OpCounters& at_n = out.counter_history[find_idx(n)];
  const OpCounters& at_K = out.counter_history[find_idx(K)];
  CountReport rep;
  rep.cycles = (K - n) / n;
  const double iters = static_cast<double>(K - n);
  const std::int64_t d_mv = (at_K.matvec_A + at_K.matvec_AH) - (at_n.matvec_A + at_n.matvec_AH);
  const std::int64_t d_pc = at_K.precond_applies - at_n.precond_applies;
  const std::int64_t d_dot = at_K.dots - at_n.dots;
  const std::int64_t d_ax = at_K.axpys - at_n.axpys;
  rep.matvec_per_iter = d_mv / iters;
  rep.precond_per_iter = d_pc / iters;
  rep.dot_per_iter = d_dot / iters;
  rep.axpy_per_iter = d_ax / iters;
  const double nn = static_cast<double>(n);
  rep.expected_matvec = (nn + 1.0) / nn;
  rep.expected_precond = (nn + 1.0) / nn;
  rep.expected_dot = nn + 1.0 + 2.0 / nn;
  rep.expected_axpy = (cfg.variant == Variant::A)
                          ? std::max(2.5 * nn + 2.5 - 2.0 / nn, 6.0) + 2.0 - 2.0 / nn
                          : 2.0 * nn + 3.0 + 2.0 / nn;
  rep.matvec_ok = (d_mv == rep.cycles * (n + 1));
  rep.precond_ok = (d_pc == rep.cycles * (n + 1));
  rep.dot_ok = std::abs(rep.dot_per_iter - rep.expected_dot) <= 2.0;
  rep.axpy_ok = std::abs(rep.axpy_per_iter - rep.expected_axpy) <= 2.0;
  return rep;
}

}  // namespace mlk

#endif  // MLK_HARNESS_HPP
