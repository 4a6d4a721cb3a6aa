#ifndef MLK_SOLVERS_BICGSTAB_HPP
#define MLK_SOLVERS_BICGSTAB_HPP

#include <chrono>

#include "mlk/csr.hpp"
#include "mlk/dense.hpp"
#include "mlk/precond.hpp"
#include "mlk/solver_types.hpp"

namespace mlk {

/// Classical two-term stabilized bi-conjugate gradients, shadow vector
/// fixed at the initial residual. One history record per half step that
/// produces a residual. The stabilization scalar gets the same kappa
/// rescale used by the block solvers.
template <class S>
SolverOutcome<S> bicgstab_solve(const CsrMatrix<S>& A, const DenseVector<S>& b,
                                const DenseVector<S>& x0, const SolverConfig& cfg,
                                const Preconditioner<S>& M) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  SolverOutcome<S> out;
  out.x = x0;
  OpCounters& ops = out.counters;
  const int max_it = cfg.max_it > 0 ? cfg.max_it : 3 * static_cast<int>(A.nrows);

  auto record = [&](std::int64_t k, double relres) {
    out.history.push_back(
        {k, relres, -1.0, ops.matvec_A + ops.matvec_AH, ops.precond_applies,
         std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - t0).count()});
    out.counter_history.push_back(ops);
  };

  const double bnrm2 = norm2(b);
  DenseVector<S> r = spmv(A, out.x);
  ops.matvec_A += 1;
  set_sub(r, b, r);
  ops.axpys += 1;
  auto rc = residual_check(norm2(r), bnrm2, cfg.tol);
  out.err = rc.relres;
  record(0, rc.relres);
  if (rc.converged) {
    out.flag = SolveFlag::converged;
    return out;
  }

  const DenseVector<S> rt = r;
  DenseVector<S> p, v, s, ph, sh, t;
  S rho_prev{}, alpha{}, omega{};

  for (int it = 1; it <= max_it; ++it) {
    const S rho = dot(rt, r);
    ops.dots += 1;
    if (rho == S{}) {
      out.flag = SolveFlag::breakdown;
      out.breakdown_reason = "shadow residual inner product vanished";
      return out;
    }
    if (it == 1) {
      p = r;
    } else {
      const S beta = (rho / rho_prev) * (alpha / omega);
      // p = r + beta * (p - omega * v)
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
      ops.axpys += 2;
    }
    ph = precond_apply(M, p);
    ops.precond_applies += 1;
    v = spmv(A, ph);
    ops.matvec_A += 1;
    const S rtv = dot(rt, v);
    ops.dots += 1;
    if (rtv == S{}) {
      out.flag = SolveFlag::breakdown;
      out.breakdown_reason = "search direction orthogonal to shadow vector";
      return out;
    }
    alpha = rho / rtv;
    s = r;
    axpy_into(s, -alpha, v);
    ops.axpys += 1;
    axpy_into(out.x, alpha, ph);
    ops.axpys += 1;
    rc = residual_check(norm2(s), bnrm2, cfg.tol);
    if (rc.converged) {
      out.err = rc.relres;
      out.iter = it;
      record(it, rc.relres);
      out.flag = SolveFlag::converged;
      return out;
    }
    sh = precond_apply(M, s);
    ops.precond_applies += 1;
    t = spmv(A, sh);
    ops.matvec_A += 1;
    RhoChoice<S> ch = choose_rho(t, s, cfg.kappa);
    ops.dots += 2;  // t^H t and t^H s
    if (ch.denom_zero) {
      out.flag = SolveFlag::breakdown;
      out.breakdown_reason = "stabilization step had zero direction";
      out.err = rc.relres;
      out.iter = it;
      return out;
    }
    omega = -ch.rho;
    out.rho_history.push_back({ch.rho_raw, ch.rho, ch.omega_abs});
    axpy_into(out.x, omega, sh);
    ops.axpys += 1;
    r = s;
    axpy_into(r, -omega, t);
    ops.axpys += 1;
    rc = residual_check(norm2(r), bnrm2, cfg.tol);
    out.err = rc.relres;
    out.iter = it;
    record(it, rc.relres);
    if (rc.converged) {
      out.flag = SolveFlag::converged;
      return out;
    }
    if (omega == S{}) {
      out.flag = SolveFlag::breakdown;
      out.breakdown_reason = "stabilization scalar vanished";
      return out;
    }
    rho_prev = rho;
  }
  out.flag = SolveFlag::no_convergence;
  return out;
}

}  // namespace mlk

#endif  // MLK_SOLVERS_BICGSTAB_HPP
