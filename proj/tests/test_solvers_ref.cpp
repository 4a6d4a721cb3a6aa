#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mlk/oracle.hpp"
#include "mlk/precond.hpp"
#include "mlk/shadow.hpp"
#include "mlk/solvers/bicgstab.hpp"
#include "mlk/solvers/mlbicg.hpp"
#include "test_helpers.hpp"

using namespace mlk;
using S = double;

TEST_CASE("bicgstab: identity system solves in one step") {
  auto I = csr_identity<S>(5);
  DenseVector<S> b{1.0, -2.0, 3.0, 0.5, 4.0};
  DenseVector<S> x0(5, 0.0);
  SolverConfig cfg;
  auto M = Preconditioner<S>::identity();
  auto out = bicgstab_solve(I, b, x0, cfg, M);
  CHECK(out.flag == SolveFlag::converged);
  CHECK(out.iter == 1);
  DenseVector<S> diff;
  set_sub(diff, out.x, b);
  CHECK(norm2(diff) <= 1e-14 * norm2(b));
}

TEST_CASE("bicgstab: Laplacian with incomplete factorization") {
  auto A = test::tridiag(64);
  DenseVector<S> b(64, 1.0);
  DenseVector<S> x0(64, 0.0);
  SolverConfig cfg;
  cfg.tol = 1e-10;
  auto M = ilu0_factor(A);
  auto out = bicgstab_solve(A, b, x0, cfg, M);
  CHECK(out.flag == SolveFlag::converged);
  // Verify against a direct dense solve.
  DenseMatrix<S> Ad(64, 64);
  for (std::int64_t i = 0; i < 64; ++i)
    for (std::int64_t p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p)
      Ad(i, A.col_idx[p]) = A.values[p];
  auto xd = dense_lu_solve(Ad, b);
  DenseVector<S> diff;
  set_sub(diff, out.x, xd);
  CHECK(norm2(diff) <= 1e-8 * norm2(xd));
}

TEST_CASE("bicgstab: rotation fixture breaks down cleanly") {
  // r0 is orthogonal to every useful search direction of this rotation.
  auto A = csr_from_triplets<S>(2, 2, {{0, 1, -1.0}, {1, 0, 1.0}});
  DenseVector<S> b{1.0, 0.0};
  DenseVector<S> x0(2, 0.0);
  SolverConfig cfg;
  cfg.tol = 1e-300;
  auto M = Preconditioner<S>::identity();
  auto out = bicgstab_solve(A, b, x0, cfg, M);
  CHECK(out.flag == SolveFlag::breakdown);
  CHECK(!out.breakdown_reason.empty());
  for (double v : out.x) CHECK(std::isfinite(v));
}

TEST_CASE("reference band solver: scaled identity converges at step one") {
  auto A = csr_from_triplets<S>(3, 3, {{0, 0, 2.0}, {1, 1, 2.0}, {2, 2, 2.0}});
  DenseVector<S> b{2.0, 4.0, -6.0};
  DenseVector<S> x0(3, 0.0);
  std::vector<DenseVector<S>> q{b};
  SolverConfig cfg;
  cfg.n = 1;
  cfg.shadow = ShadowMode::explicit_q;
  auto out = mlbicg_solve(A, b, x0, cfg, (SolveTrace<S>*)nullptr, &q);
  CHECK(out.flag == SolveFlag::converged);
  CHECK(out.iter == 1);
  CHECK(out.x[0] == doctest::Approx(1.0));
  CHECK(out.x[1] == doctest::Approx(2.0));
  CHECK(out.x[2] == doctest::Approx(-3.0));
}

TEST_CASE("reference band solver: residual identity and left orthogonality") {
  for (int trial = 0; trial < 5; ++trial) {
    std::mt19937_64 rng(40 + trial);
    const int N = 20;
    auto A = test::random_dense_system(N, 6.0, 0.5, rng);
    auto b = test::random_vector(N, rng);
    DenseVector<S> x0(N, 0.0);
    const int n = 2;
    auto blk = build_shadow_block(b, n, ShadowMode::randn_r0, 50 + trial);
    SolverConfig cfg;
    cfg.n = n;
    cfg.tol = 1e-300;
    cfg.max_it = 10;
    cfg.shadow = ShadowMode::explicit_q;
    SolveTrace<S> tr;
    auto out = mlbicg_solve(A, b, x0, cfg, &tr, &blk.cols);
    REQUIRE(out.flag != SolveFlag::breakdown);
    const double bn = norm2(b);
    for (std::size_t idx = 0; idx < tr.ks.size(); ++idx) {
      const long k = static_cast<long>(tr.ks[idx]);
      if (k < 1) continue;
      // Computed residual vs. the defining identity b - A x.
      DenseVector<S> want = spmv(A, tr.x[idx]);
      set_sub(want, b, want);
      DenseVector<S> diff;
      set_sub(diff, tr.r[idx], want);
      CHECK(norm2(diff) <= 1e-10 * bn);
      // The residual is annihilated by every left vector built so far,
      // but not by the next one.
      const double rn = norm2(tr.r[idx]);
      for (long s = 1; s <= k; ++s) {
        auto p = shadow_p(A, blk.cols, n, s);
        CHECK(std::abs(dot(p, tr.r[idx])) <= 1e-8 * norm2(p) * rn);
      }
      auto pnext = shadow_p(A, blk.cols, n, k + 1);
      CHECK(std::abs(dot(pnext, tr.r[idx])) > 1e-8 * norm2(pnext) * rn);
    }
  }
}

TEST_CASE("reference band solver: adaptive left block orthogonalizes residuals") {
  // With as many left vectors as the problem degree, residuals become
  // mutually orthogonal (the full-orthogonalization limit).
  for (int trial = 0; trial < 5; ++trial) {
    std::mt19937_64 rng(60 + trial);
    const int N = 10;
    auto A = test::random_dense_system(N, 4.0, 1.0, rng);
    auto b = test::random_vector(N, rng);
    DenseVector<S> x0(N, 0.0);
    SolverConfig cfg;
    cfg.n = N;
    cfg.tol = 1e-300;
    cfg.max_it = N;
    cfg.shadow = ShadowMode::adaptive_fom;
    SolveTrace<S> tr;
    auto out = mlbicg_solve(A, b, x0, cfg, &tr, (const std::vector<DenseVector<S>>*)nullptr);
    REQUIRE(out.flag != SolveFlag::breakdown);
    const double bn = norm2(b);
    for (std::size_t a = 1; a < tr.r.size(); ++a)
      for (std::size_t s = 0; s < a; ++s) {
        const double na = norm2(tr.r[a]);
        const double ns = norm2(tr.r[s]);
        // Residuals at roundoff level carry no directional information.
        if (na <= 1e-7 * bn || ns <= 1e-7 * bn) continue;
        CHECK(std::abs(dot(tr.r[a], tr.r[s])) <= 1e-8 * na * ns);
      }
  }
}

TEST_CASE("reference band solver: adaptive mode caps the iteration budget") {
  auto A = test::tridiag(8);
  DenseVector<S> b(8, 1.0);
  DenseVector<S> x0(8, 0.0);
  SolverConfig cfg;
  cfg.n = 2;
  cfg.max_it = 5;  // exceeds n, invalid for the adaptive block
  cfg.shadow = ShadowMode::adaptive_fom;
  CHECK_THROWS_AS(mlbicg_solve(A, b, x0, cfg, (SolveTrace<S>*)nullptr,
                               (const std::vector<DenseVector<S>>*)nullptr),
                  ConfigurationError);
}

TEST_CASE("reference band solver: nonzero moment determinants predict a clean run") {
  for (int trial = 0; trial < 5; ++trial) {
    std::mt19937_64 rng(70 + trial);
    const int N = 10;
    auto A = test::random_dense_system(N, 6.0, 0.5, rng);
    auto b = test::random_vector(N, rng);
    DenseVector<S> x0(N, 0.0);
    const int n = 2;
    auto blk = build_shadow_block(b, n, ShadowMode::randn_r0, 80 + trial);
    const long nu = minimal_poly_degree(A, b, N);
    auto md = moment_determinants(A, b, blk.cols, nu);
    bool all_nonzero = true;
    for (long l = 0; l < nu; ++l)
      if (md.det_S[l] == 0.0 || md.det_W[l] == 0.0) all_nonzero = false;
    REQUIRE(all_nonzero);
    SolverConfig cfg;
    cfg.n = n;
    cfg.tol = 1e-4;
    cfg.max_it = static_cast<int>(nu) + 2;  // slack for roundoff past the exact degree
    cfg.shadow = ShadowMode::explicit_q;
    auto out = mlbicg_solve(A, b, x0, cfg, (SolveTrace<S>*)nullptr, &blk.cols);
    CHECK(out.flag == SolveFlag::converged);
    CHECK(out.err <= 1e-4);
  }
}

TEST_CASE("reference band solver: breakdown leaves finite state") {
  auto A = csr_from_triplets<S>(2, 2, {{0, 1, -1.0}, {1, 0, 1.0}});
  DenseVector<S> b{1.0, 0.0};
  DenseVector<S> x0(2, 0.0);
  std::vector<DenseVector<S>> q{DenseVector<S>{1.0, 0.0}};  // orthogonal to A r0
  SolverConfig cfg;
  cfg.n = 1;
  cfg.tol = 1e-300;
  cfg.max_it = 10;
  cfg.shadow = ShadowMode::explicit_q;
  auto out = mlbicg_solve(A, b, x0, cfg, (SolveTrace<S>*)nullptr, &q);
  CHECK(out.flag == SolveFlag::breakdown);
  for (double v : out.x) CHECK(std::isfinite(v));
}
