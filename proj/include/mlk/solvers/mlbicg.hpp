#ifndef MLK_SOLVERS_MLBICG_HPP
#define MLK_SOLVERS_MLBICG_HPP

#include <chrono>
#include <cmath>
#include <vector>

#include "mlk/csr.hpp"
#include "mlk/dense.hpp"
#include "mlk/index_maps.hpp"
#include "mlk/shadow.hpp"
#include "mlk/solver_types.hpp"

namespace mlk {

/// Band bi-Lanczos CG-like reference method over n left Krylov chains.
/// Unpreconditioned; exists as a correctness anchor for the stabilized
/// variants, not for production use.
template <class S>
SolverOutcome<S> mlbicg_solve(const CsrMatrix<S>& A, const DenseVector<S>& b,
                              const DenseVector<S>& x0, const SolverConfig& cfg,
                              SolveTrace<S>* trace = nullptr,
                              const std::vector<DenseVector<S>>* explicit_q = nullptr) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  SolverOutcome<S> out;
  out.x = x0;
  OpCounters& ops = out.counters;
  const long n = cfg.n;
  const int max_it = cfg.max_it > 0 ? cfg.max_it : 3 * static_cast<int>(A.nrows);
  if (cfg.shadow == ShadowMode::adaptive_fom && max_it > n)
    throw ConfigurationError("adaptive shadow mode supports at most n iterations");
  constexpr double kPivotFloor = 1e-290;

  auto record = [&](std::int64_t k, double relres) {
    out.history.push_back(
        {k, relres, -1.0, ops.matvec_A + ops.matvec_AH, ops.precond_applies,
         std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - t0).count()});
    out.counter_history.push_back(ops);
  };
  auto snap = [&](std::int64_t k, const DenseVector<S>& r) {
    if (!trace) return;
    trace->ks.push_back(k);
    trace->r.push_back(r);
    trace->x.push_back(out.x);
  };

  const double bnrm2 = norm2(b);
  DenseVector<S> r = spmv(A, out.x);
  ops.matvec_A += 1;
  set_sub(r, b, r);
  ops.axpys += 1;
  auto rc = residual_check(norm2(r), bnrm2, cfg.tol);
  out.err = rc.relres;
  record(0, rc.relres);
  snap(0, r);
  if (rc.converged) {
    out.flag = SolveFlag::converged;
    return out;
  }

  ShadowBlock<S> Q;
  if (cfg.shadow == ShadowMode::explicit_q) {
    if (!explicit_q || static_cast<long>(explicit_q->size()) != n)
      throw std::invalid_argument("solver: explicit shadow mode needs n columns");
    Q.cols = *explicit_q;
  } else {
    Q = build_shadow_block(r, static_cast<int>(n), cfg.shadow, cfg.seed);
  }

  // Rings over the last n chain vectors: P[(k-1) % n] = p_k,
  // G[k % n] = g_k, AG[k % n] = A g_k.
  std::vector<DenseVector<S>> P(static_cast<std::size_t>(n));
  std::vector<DenseVector<S>> G(static_cast<std::size_t>(n));
  std::vector<DenseVector<S>> AG(static_cast<std::size_t>(n));
  P[0] = Q.cols[0];  // p_1 = q_1
  G[0] = r;          // g_0 = r_0
  AG[0] = spmv(A, r);
  ops.matvec_A += 1;

  for (long k = 1; k <= max_it; ++k) {
    const DenseVector<S>& pk = P[static_cast<std::size_t>((k - 1) % n)];
    const DenseVector<S>& g_prev = G[static_cast<std::size_t>((k - 1) % n)];
    const DenseVector<S>& Ag_prev = AG[static_cast<std::size_t>((k - 1) % n)];
    const S den = dot(pk, Ag_prev);
    ops.dots += 1;
    if (abs_of(den) < kPivotFloor) {
      out.flag = SolveFlag::breakdown;
      out.breakdown_reason = "chain pivot vanished";
      out.iter = k - 1;
      return out;
    }
    const S alpha = dot(pk, r) / den;
    ops.dots += 1;
    axpy_into(out.x, alpha, g_prev);
    axpy_into(r, -alpha, Ag_prev);
    ops.axpys += 2;
    rc = residual_check(norm2(r), bnrm2, cfg.tol);
    out.err = rc.relres;
    out.iter = k;
    record(k, rc.relres);
    snap(k, r);
    if (rc.converged) {
      out.flag = SolveFlag::converged;
      return out;
    }
    if (k == max_it) break;

    // Next left vector p_{k+1}.
    DenseVector<S> p_next;
    if (k + 1 <= n) {
      if (Q.adaptive && Q.cols[static_cast<std::size_t>(k)].empty())
        Q.cols[static_cast<std::size_t>(k)] = r;  // q_{k+1} = r_k
      p_next = Q.cols[static_cast<std::size_t>(k)];
      if (p_next.empty()) throw ConfigurationError("mlbicg: shadow column k+1 unset");
    } else {
      if (Q.adaptive)
        throw ConfigurationError("mlbicg: adaptive shadow mode is limited to n iterations");
      p_next = spmv_adjoint(A, P[static_cast<std::size_t>(k % n)]);
      ops.matvec_AH += 1;
    }

    // New chain vector g_k = r_k + sum beta_s g_s, A g_k built alongside.
    DenseVector<S> w = spmv(A, r);
    ops.matvec_A += 1;
    DenseVector<S> g_new = r;
    const long s_lo = std::max<long>(k - n, 0);
    for (long s = s_lo; s <= k - 1; ++s) {
      const DenseVector<S>& ps1 = P[static_cast<std::size_t>(s % n)];
      const DenseVector<S>& gs = G[static_cast<std::size_t>(s % n)];
      const DenseVector<S>& Ags = AG[static_cast<std::size_t>(s % n)];
      const S dsn = dot(ps1, Ags);
      ops.dots += 1;
      if (abs_of(dsn) < kPivotFloor) {
        out.flag = SolveFlag::breakdown;
        out.breakdown_reason = "chain pivot vanished";
        return out;
      }
      const S beta = -dot(ps1, w) / dsn;
      ops.dots += 1;
      axpy_into(w, beta, Ags);
      axpy_into(g_new, beta, gs);
      ops.axpys += 2;
    }
    P[static_cast<std::size_t>(k % n)] = std::move(p_next);
    G[static_cast<std::size_t>(k % n)] = std::move(g_new);
    AG[static_cast<std::size_t>(k % n)] = std::move(w);
  }
  out.flag = SolveFlag::no_convergence;
  return out;
}

}  // namespace mlk

#endif  // MLK_SOLVERS_MLBICG_HPP
