#ifndef MLK_SOLVERS_MLBICGSTAB_A_HPP
#define MLK_SOLVERS_MLBICGSTAB_A_HPP

#include <chrono>
#include <vector>

#include "mlk/csr.hpp"
#include "mlk/dense.hpp"
#include "mlk/precond.hpp"
#include "mlk/shadow.hpp"
#include "mlk/solver_types.hpp"

namespace mlk {

/// Stabilized block solver, residual convention A: the computed residual
/// carries one extra stabilizing factor relative to convention B. Storage
/// is n columns each of g and w plus n-2 difference columns d; the
/// one-dimensional minimization runs once per cycle of n steps.
///
/// explicit_q supplies all shadow columns when cfg.shadow == explicit_q;
/// otherwise it must be null.
template <class S>
SolverOutcome<S> mlbicgstab_a_solve(const CsrMatrix<S>& A, const DenseVector<S>& b,
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

  // One-based views onto the column workspace, matching the recurrences.
  std::vector<DenseVector<S>> Gs(static_cast<std::size_t>(n));
  std::vector<DenseVector<S>> Ws(static_cast<std::size_t>(n));
  std::vector<DenseVector<S>> Ds(static_cast<std::size_t>(n > 2 ? n - 2 : 0));
  std::vector<S> cs(static_cast<std::size_t>(n), S{});
  auto Gc = [&](int i) -> DenseVector<S>& { return Gs[static_cast<std::size_t>(i - 1)]; };
  auto Wc = [&](int i) -> DenseVector<S>& { return Ws[static_cast<std::size_t>(i - 1)]; };
  auto Dc = [&](int i) -> DenseVector<S>& { return Ds[static_cast<std::size_t>(i - 1)]; };
  auto cc = [&](int i) -> S& { return cs[static_cast<std::size_t>(i - 1)]; };

  auto breakdown = [&](const char* why) {
    out.flag = SolveFlag::breakdown;
    out.breakdown_reason = why;
    return out;
  };

  Gc(n) = r;
  DenseVector<S> g_t = precond_apply(M, r);
  ops.precond_applies += 1;
  Wc(n) = spmv(A, g_t);
  ops.matvec_A += 1;
  cc(n) = dot(q(1), Wc(n));
  ops.dots += 1;
  if (cc(n) == S{}) return breakdown("projection pivot vanished at startup");
  S e = dot(q(1), r);
  ops.dots += 1;

  long iter = 0;
  DenseVector<S> u, z;
  for (long j = 0;; ++j) {
    S alpha = e / cc(n);
    axpy_into(out.x, alpha, g_t);
    u = r;
    axpy_into(u, -alpha, Wc(n));
    ops.axpys += 2;
    if (trace) {
      trace->u_ks.push_back(j * n + 1);
      trace->u.push_back(u);
    }
    rc = residual_check(norm2(u), bnrm2, cfg.tol);
    if (rc.converged) {
      out.err = rc.relres;
      out.iter = ++iter;
      record(iter, rc.relres, u);
      out.flag = SolveFlag::converged;
      return out;
    }
    g_t = precond_apply(M, u);
    ops.precond_applies += 1;
    z = spmv(A, g_t);
    ops.matvec_A += 1;
    RhoChoice<S> ch = choose_rho(z, u, cfg.kappa);
    ops.dots += 2;
    if (ch.denom_zero) return breakdown("minimization direction vanished");
    if (ch.omega_raw == S{}) return breakdown("minimization inner product vanished");
    const S rho = ch.rho;
    out.rho_history.push_back({ch.rho_raw, ch.rho, ch.omega_abs});
    if (trace) {
      trace->min_u.push_back(u);
      trace->min_Au.push_back(z);
    }
    axpy_into(out.x, -rho, g_t);
    set_xpay(r, u, rho, z);
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

    for (int i = 1; i <= n - 1; ++i) {
      if (Q.adaptive && Q.cols[static_cast<std::size_t>(i)].empty())
        Q.cols[static_cast<std::size_t>(i)] = u;  // q_{i+1} from the current u
      S f = dot(q(i + 1), u);
      ops.dots += 1;
      S beta;
      if (j >= 1) {
        beta = -f / cc(i);
        if (i <= n - 2) {
          set_xpay(Dc(i), u, beta, Dc(i));
          scale(Gc(i), beta);
          scale(Wc(i), beta);
          ops.axpys += 3;
          beta = -dot(q(i + 2), Dc(i)) / cc(i + 1);
          ops.dots += 1;
          for (int s = i + 1; s <= n - 2; ++s) {
            axpy_into(Dc(i), beta, Dc(s));
            axpy_into(Gc(i), beta, Gc(s));
            axpy_into(Wc(i), beta, Wc(s));
            ops.axpys += 3;
            beta = -dot(q(s + 2), Dc(i)) / cc(s + 1);
            ops.dots += 1;
          }
          axpy_into(Gc(i), beta, Gc(n - 1));
          axpy_into(Wc(i), beta, Wc(n - 1));
          set_xpay(Wc(i), r, rho, Wc(i));
          ops.axpys += 3;
        } else {
          scale(Gc(i), beta);  // here i == n-1
          set_xpay(Wc(i), r, rho * beta, Wc(n - 1));
          ops.axpys += 2;
        }
        beta = -dot(q(1), Wc(i)) / cc(n);
        ops.dots += 1;
        axpy_into(Wc(i), beta, Wc(n));
        ops.axpys += 1;
        // G(:,i) += W(:,i) + (beta/rho) G(:,n)
        {
          DenseVector<S>& Gi = Gc(i);
          const DenseVector<S>& Wi = Wc(i);
          const DenseVector<S>& Gn = Gc(n);
          const S s2 = beta / rho;
          for (std::size_t t = 0; t < Gi.size(); ++t) Gi[t] += Wi[t] + s2 * Gn[t];
          ops.axpys += 2;
        }
      } else {
        beta = -dot(q(1), r) / cc(n);
        ops.dots += 1;
        set_xpay(Wc(i), r, beta, Wc(n));
        set_xpay(Gc(i), Wc(i), beta / rho, Gc(n));
        ops.axpys += 2;
      }
      for (int s = 1; s <= i - 1; ++s) {
        beta = -dot(q(s + 1), Wc(i)) / cc(s);
        ops.dots += 1;
        axpy_into(Gc(i), beta, Gc(s));
        axpy_into(Wc(i), beta, Dc(s));
        ops.axpys += 2;
      }
      if (i < n - 1) {
        set_sub(Dc(i), Wc(i), u);
        ops.axpys += 1;
        cc(i) = dot(q(i + 1), Dc(i));
        ops.dots += 1;
        if (cc(i) == S{}) return breakdown("projection pivot vanished");
        if (trace) {
          trace->d_ks.push_back(j * n + i);
          trace->d.push_back(Dc(i));
          trace->c_ks.push_back(j * n + i);
          trace->c.push_back(cc(i));
        }
        alpha = f / cc(i);
        axpy_into(u, -alpha, Dc(i));
        ops.axpys += 1;
        if (trace) {
          trace->u_ks.push_back(j * n + i + 1);
          trace->u.push_back(u);
        }
      } else {
        DenseVector<S> diff;
        set_sub(diff, Wc(i), u);
        ops.axpys += 1;
        cc(i) = dot(q(i + 1), diff);
        ops.dots += 1;
        if (cc(i) == S{}) return breakdown("projection pivot vanished");
        if (trace) {
          trace->d_ks.push_back(j * n + i);
          trace->d.push_back(diff);
          trace->c_ks.push_back(j * n + i);
          trace->c.push_back(cc(i));
        }
        alpha = f / cc(i);
      }
      g_t = precond_apply(M, Gc(i));
      ops.precond_applies += 1;
      Wc(i) = spmv(A, g_t);
      ops.matvec_A += 1;
      alpha = rho * alpha;
      axpy_into(out.x, alpha, g_t);
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
    }

    e = dot(q(1), r);
    ops.dots += 1;
    S beta = -e / cc(n);
    set_xpay(Wc(n), r, beta, Wc(n));
    set_xpay(Gc(n), Wc(n), beta / rho, Gc(n));
    ops.axpys += 2;
    if (n >= 2) {
      beta = -dot(q(2), Wc(n)) / cc(1);
      ops.dots += 1;
      for (int s = 1; s <= n - 2; ++s) {
        axpy_into(Gc(n), beta, Gc(s));
        axpy_into(Wc(n), beta, Dc(s));
        ops.axpys += 2;
        beta = -dot(q(s + 2), Wc(n)) / cc(s + 1);
        ops.dots += 1;
      }
      axpy_into(Gc(n), beta, Gc(n - 1));
      ops.axpys += 1;
    }
    g_t = precond_apply(M, Gc(n));
    ops.precond_applies += 1;
    Wc(n) = spmv(A, g_t);
    ops.matvec_A += 1;
    cc(n) = dot(q(1), Wc(n));
    ops.dots += 1;
    if (cc(n) == S{}) return breakdown("projection pivot vanished");
    if (trace) {
      trace->c_ks.push_back((j + 1) * n);
      trace->c.push_back(cc(n));
    }
  }
}

}  // namespace mlk

#endif  // MLK_SOLVERS_MLBICGSTAB_A_HPP
