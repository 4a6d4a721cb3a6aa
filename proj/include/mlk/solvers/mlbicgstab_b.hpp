#ifndef MLK_SOLVERS_MLBICGSTAB_B_HPP
#define MLK_SOLVERS_MLBICGSTAB_B_HPP

#include <chrono>
#include <vector>

#include "mlk/csr.hpp"
#include "mlk/dense.hpp"
#include "mlk/precond.hpp"
#include "mlk/shadow.hpp"
#include "mlk/solver_types.hpp"

namespace mlk {

/// Stabilized block solver, residual convention B: the computed residual
/// carries one fewer stabilizing factor than convention A, which removes
/// the difference columns and shortens the recurrences. Storage is n
/// columns each of the preconditioned direction and its image under A.
template <class S>
SolverOutcome<S> mlbicgstab_b_solve(const CsrMatrix<S>& A, const DenseVector<S>& b,
                                    const DenseVector<S>& x0, const SolverConfig& cfg,
                                    const Preconditioner<S>& M,
                                    SolveTrace<S>* trace = nullptr,
                                    const std::vector<DenseVector<S>>* explicit_q = nullptr) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  SolverOutcome<S> out;
  out.x = x0;
  OpCounters& ops = out.counters;
  const int n = cfg.n;
  if (n < 1) throw std::invalid_argument("solver: n must be >= 1");
  const long max_it = cfg.max_it > 0 ? cfg.max_it : 3 * A.nrows;
  if (cfg.shadow == ShadowMode::adaptive_fom && max_it > n)
    throw ConfigurationError("adaptive shadow mode supports at most n iterations");

  auto record = [&](std::int64_t k, double relres, const DenseVector<S>& res) {
    out.history.push_back(
        {k, relres, -1.0, ops.matvec_A + ops.matvec_AH, ops.precond_applies,
         std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - t0).count()});
    out.counter_history.push_back(ops);
    if (trace) {
      trace->ks.push_back(k);
      trace->r.push_back(res);
      trace->x.push_back(out.x);
    }
  };

  const double bnrm2 = norm2(b);
  DenseVector<S> r = spmv(A, out.x);
  ops.matvec_A += 1;
  set_sub(r, b, r);
  ops.axpys += 1;
  auto rc = residual_check(norm2(r), bnrm2, cfg.tol);
  out.err = rc.relres;
  record(0, rc.relres, r);
  if (rc.converged) {
    out.flag = SolveFlag::converged;
    return out;
  }

  ShadowBlock<S> Q;
  if (cfg.shadow == ShadowMode::explicit_q) {
    if (!explicit_q || static_cast<int>(explicit_q->size()) != n)
      throw std::invalid_argument("solver: explicit shadow mode needs n columns");
    Q.cols = *explicit_q;
  } else {
    Q = build_shadow_block(r, n, cfg.shadow, cfg.seed);
  }
  auto q = [&](int i) -> const DenseVector<S>& {
    const DenseVector<S>& col = Q.cols[static_cast<std::size_t>(i - 1)];
    if (col.empty()) throw ConfigurationError("solver: shadow column unset");
    return col;
  };

  std::vector<DenseVector<S>> Gs(static_cast<std::size_t>(n));
  std::vector<DenseVector<S>> Ws(static_cast<std::size_t>(n));
  std::vector<S> cs(static_cast<std::size_t>(n), S{});
  auto Gc = [&](int i) -> DenseVector<S>& { return Gs[static_cast<std::size_t>(i - 1)]; };
  auto Wc = [&](int i) -> DenseVector<S>& { return Ws[static_cast<std::size_t>(i - 1)]; };
  auto cc = [&](int i) -> S& { return cs[static_cast<std::size_t>(i - 1)]; };

  auto breakdown = [&](const char* why) {
    out.flag = SolveFlag::breakdown;
    out.breakdown_reason = why;
    return out;
  };

  Gc(1) = precond_apply(M, r);
  ops.precond_applies += 1;
  Wc(1) = spmv(A, Gc(1));
  ops.matvec_A += 1;
  cc(1) = dot(q(1), Wc(1));
  ops.dots += 1;
  if (cc(1) == S{}) return breakdown("projection pivot vanished at startup");
  S e = dot(q(1), r);
  ops.dots += 1;

  long iter = 0;
  S rho{};
  DenseVector<S> u_t, z;
  for (long j = 0;; ++j) {
    for (int i = 1; i <= n - 1; ++i) {
      S alpha = e / cc(i);
      axpy_into(out.x, alpha, Gc(i));
      axpy_into(r, -alpha, Wc(i));
      ops.axpys += 2;
      rc = residual_check(norm2(r), bnrm2, cfg.tol);
      out.err = rc.relres;
      out.iter = ++iter;
      record(iter, rc.relres, r);
      if (rc.converged) {
        out.flag = SolveFlag::converged;
        return out;
      }
      if (iter >= max_it) {
        out.flag = SolveFlag::no_convergence;
        return out;
      }
      if (Q.adaptive && Q.cols[static_cast<std::size_t>(i)].empty())
        Q.cols[static_cast<std::size_t>(i)] = r;  // q_{i+1} from the current residual
      e = dot(q(i + 1), r);
      ops.dots += 1;
      if (j >= 1) {
        S beta = -e / cc(i + 1);
        set_xpay(Wc(i + 1), r, beta, Wc(i + 1));
        scale(Gc(i + 1), beta);
        ops.axpys += 2;
        for (int s = i + 1; s <= n - 1; ++s) {
          beta = -dot(q(s + 1), Wc(i + 1)) / cc(s + 1);
          ops.dots += 1;
          axpy_into(Wc(i + 1), beta, Wc(s + 1));
          axpy_into(Gc(i + 1), beta, Gc(s + 1));
          ops.axpys += 2;
        }
        DenseVector<S> mz = precond_apply(M, Wc(i + 1));
        ops.precond_applies += 1;
        set_xpay(Gc(i + 1), mz, S{1.0} / rho, Gc(i + 1));
        ops.axpys += 1;
      } else {
        Gc(i + 1) = precond_apply(M, r);
        ops.precond_applies += 1;
      }
      Wc(i + 1) = spmv(A, Gc(i + 1));
      ops.matvec_A += 1;
      for (int s = 0; s <= i - 1; ++s) {
        S beta = -dot(q(s + 1), Wc(i + 1)) / cc(s + 1);
        ops.dots += 1;
        axpy_into(Wc(i + 1), beta, Wc(s + 1));
        axpy_into(Gc(i + 1), beta, Gc(s + 1));
        ops.axpys += 2;
      }
      cc(i + 1) = dot(q(i + 1), Wc(i + 1));
      ops.dots += 1;
      if (cc(i + 1) == S{}) return breakdown("projection pivot vanished");
      if (trace) {
        trace->w_ks.push_back(j * n + i);
        trace->w.push_back(Wc(i + 1));
        trace->c_ks.push_back(j * n + i);
        trace->c.push_back(cc(i + 1));
      }
    }

    S alpha = e / cc(n);
    axpy_into(out.x, alpha, Gc(n));
    axpy_into(r, -alpha, Wc(n));
    ops.axpys += 2;
    if (trace) {
      trace->u_ks.push_back(j * n + n);
      trace->u.push_back(r);
    }
    rc = residual_check(norm2(r), bnrm2, cfg.tol);
    if (rc.converged) {
      out.err = rc.relres;
      out.iter = ++iter;
      record(iter, rc.relres, r);
      out.flag = SolveFlag::converged;
      return out;
    }
    u_t = precond_apply(M, r);
    ops.precond_applies += 1;
    z = spmv(A, u_t);
    ops.matvec_A += 1;
    RhoChoice<S> ch = choose_rho(z, r, cfg.kappa);
    ops.dots += 2;
    if (ch.denom_zero) return breakdown("minimization direction vanished");
    if (ch.omega_raw == S{}) return breakdown("minimization inner product vanished");
    rho = ch.rho;
    out.rho_history.push_back({ch.rho_raw, ch.rho, ch.omega_abs});
    if (trace) {
      trace->min_u.push_back(r);
      trace->min_Au.push_back(z);
    }
    axpy_into(out.x, -rho, u_t);
    axpy_into(r, rho, z);
    ops.axpys += 2;
    rc = residual_check(norm2(r), bnrm2, cfg.tol);
    out.err = rc.relres;
    out.iter = ++iter;
    record(iter, rc.relres, r);
    if (rc.converged) {
      out.flag = SolveFlag::converged;
      return out;
    }
    if (iter >= max_it) {
      out.flag = SolveFlag::no_convergence;
      return out;
    }

    e = dot(q(1), r);
    ops.dots += 1;
    S beta = -e / cc(1);
    set_xpay(Wc(1), r, beta, Wc(1));
    scale(Gc(1), beta);
    ops.axpys += 2;
    for (int s = 1; s <= n - 1; ++s) {
      beta = -dot(q(s + 1), Wc(1)) / cc(s + 1);
      ops.dots += 1;
      axpy_into(Wc(1), beta, Wc(s + 1));
      axpy_into(Gc(1), beta, Gc(s + 1));
      ops.axpys += 2;
    }
    {
      DenseVector<S> mz = precond_apply(M, Wc(1));
      ops.precond_applies += 1;
      set_xpay(Gc(1), mz, S{1.0} / rho, Gc(1));
      ops.axpys += 1;
    }
    Wc(1) = spmv(A, Gc(1));
    ops.matvec_A += 1;
    cc(1) = dot(q(1), Wc(1));
    ops.dots += 1;
    if (cc(1) == S{}) return breakdown("projection pivot vanished");
    if (trace) {
      trace->w_ks.push_back((j + 1) * n);
      trace->w.push_back(Wc(1));
      trace->c_ks.push_back((j + 1) * n);
      trace->c.push_back(cc(1));
    }
  }
}

}  // namespace mlk

#endif  // MLK_SOLVERS_MLBICGSTAB_B_HPP
