#ifndef MLK_SOLVER_TYPES_HPP
#define MLK_SOLVER_TYPES_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlk/counters.hpp"
#include "mlk/dense.hpp"
#include "mlk/scalar.hpp"

namespace mlk {

enum class SolveFlag : int {
  converged = 0,
  no_convergence = 1,
  breakdown = -1,
};

enum class Variant { A, B };

enum class ShadowMode {
  randn_r0,
  sign_r0,
  complex_randn_r0,
  complex_sign_r0,
  adaptive_fom,
  explicit_q,
};

class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  int n = 1;
  double tol = 1e-7;
  int max_it = 0;  // 0 means 3*N, set at solve time
  double kappa = 0.0;
  ShadowMode shadow = ShadowMode::randn_r0;
  std::uint64_t seed = 0;
  Variant variant = Variant::A;
};

/// One convergence-history row; counters are cumulative at record time.
struct ConvergenceRecord {
  std::int64_t k = 0;
  double relres = 0.0;
  double true_relres = -1.0;  // filled on demand, < 0 when not computed
  std::int64_t matvecs = 0;
  std::int64_t precond_applies = 0;
  std::int64_t wall_ns = 0;
};

/// One recorded rho step: the raw minimizer, the value actually used after
/// the kappa safeguard, and |omega_hat| = |(Au)^H u| / (||Au|| ||u||).
template <class S>
struct RhoRecord {
  S rho_raw{};
  S rho{};
  double omega_abs = 0.0;
};

template <class S>
struct SolverOutcome {
  DenseVector<S> x;
  double err = 0.0;
  std::int64_t iter = 0;
  SolveFlag flag = SolveFlag::no_convergence;
  std::string breakdown_reason;
  std::vector<ConvergenceRecord> history;
  OpCounters counters;
  std::vector<RhoRecord<S>> rho_history;
  // Full counter snapshot taken at each history record; used for
  // steady-state per-cycle cost accounting.
  std::vector<OpCounters> counter_history;
};

/// Desk-scale instrumentation: per-iteration snapshots for oracle and
/// property tests. All sinks are optional; leave the pointer null for
/// production runs.
template <class S>
struct SolveTrace {
  // Aligned with history records: computed residual and iterate at step k.
  std::vector<std::int64_t> ks;
  std::vector<DenseVector<S>> r;
  std::vector<DenseVector<S>> x;
  // Independent side channels, each with its own index list.
  std::vector<std::int64_t> u_ks;
  std::vector<DenseVector<S>> u;
  std::vector<std::int64_t> d_ks;
  std::vector<DenseVector<S>> d;
  std::vector<std::int64_t> w_ks;
  std::vector<DenseVector<S>> w;
  std::vector<std::int64_t> c_ks;
  std::vector<S> c;
  // (u, Au) pairs at each one-dimensional minimization, for argmin checks.
  std::vector<DenseVector<S>> min_u;
  std::vector<DenseVector<S>> min_Au;
};

struct ResidualCheck {
  double relres;
  bool converged;
};

/// Relative-residual test with the zero-rhs fallback; strict inequality.
inline ResidualCheck residual_check(double r_norm, double b_norm, double tol) {
  const double denom = (b_norm == 0.0) ? 1.0 : b_norm;
  const double relres = r_norm / denom;
  return {relres, relres < tol};
}

template <class S>
struct RhoChoice {
  S rho{};
  S omega_raw{};     // (Au)^H u before normalization
  double omega_abs = 0.0;
  S rho_raw{};
  bool denom_zero = false;  // ||Au|| == 0
};

/// rho = -(Au)^H u / ||Au||^2, with the Sleijpen-van der Vorst rescale when
/// kappa > 0 and |omega_hat| < kappa. A zero (Au)^H u is returned as rho = 0
/// and left to the caller's guard.
template <class S>
RhoChoice<S> choose_rho(const DenseVector<S>& Au, const DenseVector<S>& u, double kappa) {
  if (Au.size() != u.size()) throw std::invalid_argument("choose_rho: length mismatch");
  RhoChoice<S> out;
  double den = 0.0;
  for (const S& z : Au) den += scalar_traits<S>::abs2(z);
  if (den == 0.0) {
    out.denom_zero = true;
    return out;
  }
  out.omega_raw = dot(Au, u);
  out.rho_raw = -out.omega_raw / S{den};
  out.rho = out.rho_raw;
  const double nu = norm2(u);
  out.omega_abs = (nu == 0.0) ? 0.0 : abs_of(out.omega_raw) / (std::sqrt(den) * nu);
  if (kappa > 0.0 && out.omega_abs != 0.0 && out.omega_abs < kappa)
    out.rho = out.rho_raw * S{kappa / out.omega_abs};
  return out;
}

}  // namespace mlk

#endif  // MLK_SOLVER_TYPES_HPP
