#ifndef MLK_ORACLE_HPP
#define MLK_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mlk/counters.hpp"
#include "mlk/csr.hpp"
#include "mlk/dense.hpp"
#include "mlk/index_maps.hpp"
#include "mlk/scalar.hpp"

namespace mlk {

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-major dense matrix, used only by the oracle layer and tests.
template <class S>
struct DenseMatrix {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<S> a;

  DenseMatrix() = default;
  DenseMatrix(std::int64_t r, std::int64_t c)
      : rows(r), cols(c), a(static_cast<std::size_t>(r * c), S{}) {}

  S& operator()(std::int64_t i, std::int64_t j) {
    return a[static_cast<std::size_t>(i * cols + j)];
  }
  const S& operator()(std::int64_t i, std::int64_t j) const {
    return a[static_cast<std::size_t>(i * cols + j)];
  }
};

/// Solves Ax = b by LU with partial pivoting. Square input only. A pivot
/// with magnitude below 1e-300 is treated as exact singularity.
template <class S>
DenseVector<S> dense_lu_solve(DenseMatrix<S> A, DenseVector<S> b) {
  if (A.rows != A.cols) throw std::invalid_argument("dense_lu_solve: square matrix required");
  const std::int64_t m = A.rows;
  if (static_cast<std::int64_t>(b.size()) != m)
    throw std::invalid_argument("dense_lu_solve: rhs length mismatch");
  for (std::int64_t k = 0; k < m; ++k) {
    std::int64_t piv = k;
    double best = abs_of(A(k, k));
    for (std::int64_t i = k + 1; i < m; ++i) {
      const double v = abs_of(A(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best < 1e-300) throw SingularMatrixError("dense_lu_solve: singular to working precision");
    if (piv != k) {
      for (std::int64_t j = 0; j < m; ++j) std::swap(A(k, j), A(piv, j));
      std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(piv)]);
    }
    for (std::int64_t i = k + 1; i < m; ++i) {
      const S l = A(i, k) / A(k, k);
      A(i, k) = l;
      for (std::int64_t j = k + 1; j < m; ++j) A(i, j) -= l * A(k, j);
      b[static_cast<std::size_t>(i)] -= l * b[static_cast<std::size_t>(k)];
    }
  }
  for (std::int64_t i = m - 1; i >= 0; --i) {
    S s = b[static_cast<std::size_t>(i)];
    for (std::int64_t j = i + 1; j < m; ++j) s -= A(i, j) * b[static_cast<std::size_t>(j)];
    b[static_cast<std::size_t>(i)] = s / A(i, i);
  }
  return b;
}

/// Determinant by the same partial-pivot LU; returns exact 0 when a pivot
/// underflows the singularity threshold.
template <class S>
S dense_determinant(DenseMatrix<S> A) {
  if (A.rows != A.cols) throw std::invalid_argument("dense_determinant: square matrix required");
  const std::int64_t m = A.rows;
  S det = S{1.0};
  for (std::int64_t k = 0; k < m; ++k) {
    std::int64_t piv = k;
    double best = abs_of(A(k, k));
    for (std::int64_t i = k + 1; i < m; ++i) {
      const double v = abs_of(A(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best < 1e-300) return S{};
    if (piv != k) {
      for (std::int64_t j = 0; j < m; ++j) std::swap(A(k, j), A(piv, j));
      det = -det;
    }
    det *= A(k, k);
    for (std::int64_t i = k + 1; i < m; ++i) {
      const S l = A(i, k) / A(k, k);
      for (std::int64_t j = k + 1; j < m; ++j) A(i, j) -= l * A(k, j);
    }
  }
  return det;
}

/// Columns [v, Av, ..., A^{m-1} v].
template <class S>
std::vector<DenseVector<S>> krylov_basis(const CsrMatrix<S>& A, const DenseVector<S>& v,
                                         std::int64_t m) {
  std::vector<DenseVector<S>> cols;
  cols.reserve(static_cast<std::size_t>(m));
  if (m <= 0) return cols;
  cols.push_back(v);
  for (std::int64_t j = 1; j < m; ++j) cols.push_back(spmv(A, cols.back()));
  return cols;
}

/// Applies phi(A) = (rho_j A + I) ... (rho_1 A + I) to v, one factor at a
/// time. Costs exactly rhos.size() products with A.
template <class S>
DenseVector<S> apply_phi(const std::vector<S>& rhos, const CsrMatrix<S>& A,
                         const DenseVector<S>& v, OpCounters* counters = nullptr) {
  DenseVector<S> w = v;
  for (const S& rho : rhos) {
    DenseVector<S> Aw = spmv(A, w);
    if (counters) counters->matvec_A += 1;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += rho * Aw[i];
  }
  return w;
}

namespace detail {

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi sweeps.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> g, std::int64_t m) {
  auto at = [&](std::int64_t i, std::int64_t j) -> double& {
    return g[static_cast<std::size_t>(i * m + j)];
  };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::int64_t p = 0; p < m; ++p)
      for (std::int64_t q = p + 1; q < m; ++q) off += at(p, q) * at(p, q);
    if (off < 1e-300) break;
    for (std::int64_t p = 0; p < m; ++p) {
      for (std::int64_t q = p + 1; q < m; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::int64_t k = 0; k < m; ++k) {
          const double gkp = at(k, p), gkq = at(k, q);
          at(k, p) = c * gkp - s * gkq;
          at(k, q) = s * gkp + c * gkq;
        }
        for (std::int64_t k = 0; k < m; ++k) {
          const double gpk = at(p, k), gqk = at(q, k);
          at(p, k) = c * gpk - s * gqk;
          at(q, k) = s * gpk + c * gqk;
        }
      }
    }
  }
  std::vector<double> eig(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) eig[static_cast<std::size_t>(i)] = at(i, i);
  return eig;
}

/// Singular values of the column set, via the real symmetric embedding of
/// the (possibly complex) Gram matrix. Each singular value of the original
/// appears twice in the embedded spectrum.
template <class S>
std::vector<double> singular_values(const std::vector<DenseVector<S>>& cols) {
  const std::int64_t m = static_cast<std::int64_t>(cols.size());
  const std::int64_t d = 2 * m;
  std::vector<double> g(static_cast<std::size_t>(d * d), 0.0);
  for (std::int64_t i = 0; i < m; ++i) {
    for (std::int64_t j = 0; j < m; ++j) {
      const S gij = dot(cols[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
      const double re = scalar_traits<S>::real(gij);
      const double im = scalar_traits<S>::imag(gij);
      g[static_cast<std::size_t>(i * d + j)] = re;
      g[static_cast<std::size_t>((i + m) * d + (j + m))] = re;
      g[static_cast<std::size_t>((i + m) * d + j)] = im;
      g[static_cast<std::size_t>(i * d + (j + m))] = -im;
    }
  }
  std::vector<double> eig = jacobi_eigenvalues(std::move(g), d);
  std::vector<double> sv;
  sv.reserve(static_cast<std::size_t>(d));
  for (double lam : eig) sv.push_back(std::sqrt(std::max(lam, 0.0)));
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  // Embedded eigenvalues come in pairs; keep one representative of each.
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < sv.size(); i += 2) out.push_back(sv[i]);
  return out;
}

}  // namespace detail

/// Degree of the minimal polynomial of v with respect to A: the smallest m
/// with rank [v, Av, ..., A^m v] = m. Rank uses singular values with a
/// relative cutoff of 1e-10 against the largest one.
template <class S>
std::int64_t minimal_poly_degree(const CsrMatrix<S>& A, const DenseVector<S>& v,
                                 std::int64_t max_degree) {
  if (norm2(v) == 0.0) throw std::invalid_argument("minimal_poly_degree: zero start vector");
  const std::int64_t cap = std::min<std::int64_t>(max_degree, A.nrows);
  std::vector<DenseVector<S>> cols = krylov_basis(A, v, cap + 1);
  for (std::int64_t m = 1; m <= cap; ++m) {
    std::vector<DenseVector<S>> head(cols.begin(), cols.begin() + m + 1);
    std::vector<double> sv = detail::singular_values(head);
    const double cutoff = 1e-10 * sv.front();
    std::int64_t rank = 0;
    for (double s : sv)
      if (s > cutoff) ++rank;
    if (rank == m) return m;
  }
  return cap;
}

/// Left vector p_k = (A^H)^g q_r with g = g_index(n, k), r = r_index(n, k),
/// built from scratch by repeated adjoint products.
template <class S>
DenseVector<S> shadow_p(const CsrMatrix<S>& A, const std::vector<DenseVector<S>>& q,
                        long n, long k) {
  const long g = g_index(n, k);
  const long r = r_index(n, k);
  if (g < 0) throw std::invalid_argument("shadow_p: k must be >= 1");
  DenseVector<S> p = q.at(static_cast<std::size_t>(r - 1));
  for (long j = 0; j < g; ++j) p = spmv_adjoint(A, p);
  return p;
}

template <class S>
struct MomentDeterminants {
  std::vector<S> det_S;  // det of the m-by-m matrix [p_l^H A^t r0], t = 1..m
  std::vector<S> det_W;  // det of [p_l^H A^{t-1} r0], t = 1..m
};

/// Leading principal moment determinants for the given left vectors p_1..p_m
/// against the Krylov sequence of r0. det_S[m-1] and det_W[m-1] are the
/// order-m determinants.
template <class S>
MomentDeterminants<S> moment_determinants(const CsrMatrix<S>& A, const DenseVector<S>& r0,
                                          const std::vector<DenseVector<S>>& p) {
  const std::int64_t m = static_cast<std::int64_t>(p.size());
  std::vector<DenseVector<S>> kry = krylov_basis(A, r0, m + 1);  // A^0..A^m r0
  MomentDeterminants<S> out;
  for (std::int64_t order = 1; order <= m; ++order) {
    DenseMatrix<S> Sm(order, order), Wm(order, order);
    for (std::int64_t l = 0; l < order; ++l) {
      for (std::int64_t t = 0; t < order; ++t) {
        Sm(l, t) = dot(p[static_cast<std::size_t>(l)], kry[static_cast<std::size_t>(t + 1)]);
        Wm(l, t) = dot(p[static_cast<std::size_t>(l)], kry[static_cast<std::size_t>(t)]);
      }
    }
    out.det_S.push_back(dense_determinant(Sm));
    out.det_W.push_back(dense_determinant(Wm));
  }
  return out;
}

/// Convenience overload: derives p_1..p_m from the shadow columns q.
template <class S>
MomentDeterminants<S> moment_determinants(const CsrMatrix<S>& A, const DenseVector<S>& r0,
                                          const std::vector<DenseVector<S>>& q, long m) {
  std::vector<DenseVector<S>> p;
  p.reserve(static_cast<std::size_t>(m));
  const long n = static_cast<long>(q.size());
  for (long k = 1; k <= m; ++k) p.push_back(shadow_p(A, q, n, k));
  return moment_determinants(A, r0, p);
}

}  // namespace mlk

#endif  // MLK_ORACLE_HPP
