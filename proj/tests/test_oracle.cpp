#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mlk/oracle.hpp"
#include "test_helpers.hpp"

using namespace mlk;

TEST_CASE("dense_lu_solve: pinned systems") {
  DenseMatrix<double> I2(2, 2);
  I2(0, 0) = I2(1, 1) = 1.0;
  auto x = dense_lu_solve(I2, DenseVector<double>{3.0, -4.0});
  CHECK(x[0] == 3.0);
  CHECK(x[1] == -4.0);

  DenseMatrix<double> A(2, 2);
  A(0, 0) = 2.0;
  A(0, 1) = 1.0;
  A(1, 0) = 1.0;
  A(1, 1) = 3.0;
  auto y = dense_lu_solve(A, DenseVector<double>{3.0, 4.0});
  CHECK(y[0] == doctest::Approx(1.0));
  CHECK(y[1] == doctest::Approx(1.0));

  DenseMatrix<double> S(2, 2);
  S(0, 0) = S(0, 1) = S(1, 0) = S(1, 1) = 1.0;
  CHECK_THROWS_AS(dense_lu_solve(S, DenseVector<double>{1.0, 1.0}), SingularMatrixError);
}

TEST_CASE("krylov_basis: raw power columns") {
  auto I = csr_identity<double>(2);
  DenseVector<double> v{1.0, 2.0};
  auto one = krylov_basis(I, v, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == v);
  auto three = krylov_basis(I, v, 3);
  REQUIRE(three.size() == 3);
  CHECK(three[1] == v);
  CHECK(three[2] == v);

  auto D = csr_from_triplets<double>(2, 2, {{0, 0, 1.0}, {1, 1, 2.0}});
  auto cols = krylov_basis(D, DenseVector<double>{1.0, 1.0}, 2);
  CHECK(cols[1] == DenseVector<double>{1.0, 2.0});
}

TEST_CASE("apply_phi: product of linear factors") {
  auto I = csr_identity<double>(2);
  DenseVector<double> v{1.0, -2.0};
  CHECK(apply_phi<double>({}, I, v) == v);

  auto twice = apply_phi<double>({1.0}, I, v);
  CHECK(twice[0] == 2.0);
  CHECK(twice[1] == -4.0);

  auto D = csr_from_triplets<double>(2, 2, {{0, 0, 1.0}, {1, 1, 3.0}});
  auto r = apply_phi<double>({1.0, 2.0}, D, DenseVector<double>{1.0, 1.0});
  CHECK(r[0] == doctest::Approx(6.0));
  CHECK(r[1] == doctest::Approx(28.0));
}

TEST_CASE("apply_phi: one product with A per factor") {
  std::mt19937_64 rng(31);
  auto A = test::random_dense_system(8, 3.0, 0.5, rng);
  auto v = test::random_vector(8, rng);
  OpCounters ops;
  apply_phi<double>({0.1, 0.2, 0.3}, A, v, &ops);
  CHECK(ops.matvec_A == 3);
}

TEST_CASE("apply_phi: factors commute") {
  std::mt19937_64 rng(32);
  auto A = test::random_dense_system(10, 3.0, 0.5, rng);
  auto v = test::random_vector(10, rng);
  std::vector<double> rhos{0.3, -0.7, 0.11, 0.5};
  auto full = apply_phi(rhos, A, v);
  // Peel the last factor off manually and apply it first instead.
  DenseVector<double> w = spmv(A, v);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = v[i] + rhos.back() * w[i];
  std::vector<double> head(rhos.begin(), rhos.end() - 1);
  auto swapped = apply_phi(head, A, w);
  DenseVector<double> diff;
  set_sub(diff, full, swapped);
  CHECK(norm2(diff) <= 1e-12 * norm2(full));
}

TEST_CASE("minimal_poly_degree: pinned fixtures") {
  auto I = csr_identity<double>(4);
  CHECK(minimal_poly_degree(I, DenseVector<double>{1.0, 2.0, 0.0, -1.0}, 4) == 1);

  auto D = csr_from_triplets<double>(2, 2, {{0, 0, 1.0}, {1, 1, 2.0}});
  CHECK(minimal_poly_degree(D, DenseVector<double>{1.0, 1.0}, 2) == 2);
  // Start vector living on one eigendirection only.
  CHECK(minimal_poly_degree(D, DenseVector<double>{1.0, 0.0}, 2) == 1);

  auto Nil = csr_from_triplets<double>(2, 2, {{0, 1, 1.0}});
  CHECK(minimal_poly_degree(Nil, DenseVector<double>{0.0, 1.0}, 2) == 2);

  CHECK_THROWS_AS(minimal_poly_degree(I, DenseVector<double>(4, 0.0), 4),
                  std::invalid_argument);
}

TEST_CASE("minimal_poly_degree: full degree on a companion matrix") {
  // Companion matrix of t^4 - t - 1 (no rational factorization), so the
  // first unit vector has a full-degree minimal polynomial.
  auto Cm = csr_from_triplets<double>(
      4, 4, {{1, 0, 1.0}, {2, 1, 1.0}, {3, 2, 1.0}, {0, 3, 1.0}, {1, 3, 1.0}});
  CHECK(minimal_poly_degree(Cm, DenseVector<double>{1.0, 0.0, 0.0, 0.0}, 4) == 4);
}

TEST_CASE("shadow_p: adjoint powers of the block columns") {
  std::mt19937_64 rng(33);
  auto A = test::random_dense_system(8, 3.0, 0.5, rng);
  std::vector<DenseVector<double>> q;
  for (int i = 0; i < 3; ++i) q.push_back(test::random_vector(8, rng));
  const long n = 3;

  CHECK(shadow_p(A, q, n, 1) == q[0]);

  auto p4 = shadow_p(A, q, n, n + 1);
  auto want4 = spmv_adjoint(A, q[0]);
  CHECK(p4 == want4);

  auto p9 = shadow_p(A, q, n, 2 * n + 3);
  auto want9 = spmv_adjoint(A, spmv_adjoint(A, q[2]));
  DenseVector<double> diff;
  set_sub(diff, p9, want9);
  CHECK(norm2(diff) == 0.0);
}

TEST_CASE("moment_determinants: pinned values") {
  auto I1 = csr_identity<double>(1);
  DenseVector<double> one{1.0};
  auto md = moment_determinants(I1, one, {one});
  REQUIRE(md.det_S.size() == 1);
  CHECK(md.det_S[0] == 1.0);
  CHECK(md.det_W[0] == 1.0);

  // A start vector whose second-order left moment matrix degenerates.
  auto D = csr_from_triplets<double>(2, 2, {{0, 0, 1.0}, {1, 1, 2.0}});
  DenseVector<double> r0{1.0, 1.0};
  std::vector<DenseVector<double>> q{DenseVector<double>{1.0, 0.0}};
  auto md2 = moment_determinants(D, r0, q, 2);
  REQUIRE(md2.det_W.size() == 2);
  CHECK(md2.det_W[0] == 1.0);
  CHECK(md2.det_W[1] == doctest::Approx(0.0));
}

TEST_CASE("moment_determinants: random left vectors avoid degeneracy") {
  auto D = csr_from_triplets<double>(2, 2, {{0, 0, 1.0}, {1, 1, 2.0}});
  DenseVector<double> r0{1.0, 1.0};
  std::normal_distribution<double> g;
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::vector<DenseVector<double>> q{DenseVector<double>{g(rng), g(rng)}};
    auto md = moment_determinants(D, r0, q, 2);
    CHECK(std::abs(md.det_W[1]) > 0.0);
  }
}

TEST_CASE("dense_determinant: sign and singularity") {
  DenseMatrix<double> P(2, 2);
  P(0, 1) = 1.0;
  P(1, 0) = 1.0;
  CHECK(dense_determinant(P) == doctest::Approx(-1.0));
  DenseMatrix<double> Z(2, 2);
  CHECK(dense_determinant(Z) == 0.0);
}
