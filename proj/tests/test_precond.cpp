#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mlk/precond.hpp"
#include "test_helpers.hpp"

using namespace mlk;

namespace {

// Dense reconstruction of L*U (unit diagonal on L implied).
std::vector<double> lu_product_dense(const Preconditioner<double>& P) {
  const std::int64_t n = P.U.nrows;
  std::vector<double> L(n * n, 0.0), U(n * n, 0.0), R(n * n, 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    L[i * n + i] = 1.0;
    for (std::int64_t p = P.L.row_ptr[i]; p < P.L.row_ptr[i + 1]; ++p)
      L[i * n + P.L.col_idx[p]] = P.L.values[p];
    for (std::int64_t p = P.U.row_ptr[i]; p < P.U.row_ptr[i + 1]; ++p)
      U[i * n + P.U.col_idx[p]] = P.U.values[p];
  }
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t k = 0; k < n; ++k)
      for (std::int64_t j = 0; j < n; ++j) R[i * n + j] += L[i * n + k] * U[k * n + j];
  return R;
}

}  // namespace

TEST_CASE("ilu0: identity factors trivially") {
  auto P = ilu0_factor(csr_identity<double>(4));
  CHECK(P.zero_pivot_replacements == 0);
  DenseVector<double> v{1.0, -2.0, 3.0, 0.5};
  CHECK(precond_apply(P, v) == v);
}

TEST_CASE("ilu0: tridiagonal factors equal the exact no-fill LU") {
  auto A = test::tridiag(3);
  auto P = ilu0_factor(A);
  // Subdiagonal of L: -1/2, -2/3. Diagonal of U: 2, 3/2, 4/3.
  REQUIRE(P.L.nnz() == 2);
  CHECK(P.L.values[0] == doctest::Approx(-0.5));
  CHECK(P.L.values[1] == doctest::Approx(-2.0 / 3.0));
  REQUIRE(P.U.nnz() == 5);
  CHECK(P.U.values[0] == doctest::Approx(2.0));
  CHECK(P.U.values[1] == doctest::Approx(-1.0));
  CHECK(P.U.values[2] == doctest::Approx(1.5));
  CHECK(P.U.values[3] == doctest::Approx(-1.0));
  CHECK(P.U.values[4] == doctest::Approx(4.0 / 3.0));

  // No fill outside the pattern, so the product reconstructs A everywhere.
  auto R = lu_product_dense(P);
  std::vector<double> dense(9, 0.0);
  for (std::int64_t i = 0; i < 3; ++i)
    for (std::int64_t p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p)
      dense[i * 3 + A.col_idx[p]] = A.values[p];
  for (int i = 0; i < 9; ++i) CHECK(std::abs(R[i] - dense[i]) <= 1e-12);
}

TEST_CASE("ilu0: zero pivot replaced by one and counted") {
  auto A = csr_from_triplets<double>(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}});
  auto P = ilu0_factor(A);
  CHECK(P.zero_pivot_replacements == 1);
  // All pivots usable afterwards.
  DenseVector<double> v{1.0, 1.0};
  auto y = precond_apply(P, v);
  for (double x : y) CHECK(std::isfinite(x));
}

TEST_CASE("ilu0: non-square input rejected") {
  auto A = csr_from_triplets<double>(2, 3, {{0, 0, 1.0}});
  CHECK_THROWS_AS(ilu0_factor(A), std::invalid_argument);
}

TEST_CASE("apply: exact inverse on a no-fill matrix") {
  auto P = ilu0_factor(test::tridiag(3));
  auto y = precond_apply(P, DenseVector<double>{1.0, 0.0, 0.0});
  CHECK(y[0] == doctest::Approx(0.75));
  CHECK(y[1] == doctest::Approx(0.5));
  CHECK(y[2] == doctest::Approx(0.25));
}

TEST_CASE("apply: dimension mismatch rejected") {
  auto P = ilu0_factor(test::tridiag(3));
  CHECK_THROWS_AS(precond_apply(P, DenseVector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("ilu0: product matches A on the sparsity pattern") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> pick(0, 49);
  const int N = 50;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Triplet<double>> t;
    for (int i = 0; i < N; ++i) {
      t.push_back({i, i, 5.0 + g(rng)});
      for (int c = 0; c < 4; ++c) {
        int j = pick(rng);
        if (j != i) t.push_back({i, j, g(rng)});
      }
    }
    auto A = csr_from_triplets<double>(N, N, std::move(t));
    auto P = ilu0_factor(A);
    auto R = lu_product_dense(P);
    double anorm = 0.0;
    for (double v : A.values) anorm += v * v;
    anorm = std::sqrt(anorm);
    for (std::int64_t i = 0; i < N; ++i)
      for (std::int64_t p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p)
        CHECK(std::abs(R[i * N + A.col_idx[p]] - A.values[p]) <= 1e-12 * anorm);
  }
}

TEST_CASE("apply inverts the factorization product") {
  std::mt19937_64 rng(22);
  auto A = test::random_dense_system(12, 6.0, 0.5, rng);
  auto P = ilu0_factor(A);
  auto R = lu_product_dense(P);
  for (int trial = 0; trial < 5; ++trial) {
    auto x = test::random_vector(12, rng);
    DenseVector<double> y(12, 0.0);
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) y[i] += R[i * 12 + j] * x[j];
    auto back = precond_apply(P, y);
    DenseVector<double> diff;
    set_sub(diff, back, x);
    CHECK(norm2(diff) <= 1e-10 * norm2(x));
  }
}
