#ifndef MLK_PRECOND_HPP
#define MLK_PRECOND_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mlk/csr.hpp"
#include "mlk/dense.hpp"

namespace mlk {

/// Polymorphic "apply M^{-1} v" contract. Identity or ILU(0) split into a
/// unit-lower L (implicit diagonal) and upper U sharing A's pattern.
template <class S>
struct Preconditioner {
  enum class Kind { identity, ilu0 };

  Kind kind = Kind::identity;
  CsrMatrix<S> L;  // strictly lower part, unit diagonal implied
  CsrMatrix<S> U;  // upper part including diagonal
  std::int64_t zero_pivot_replacements = 0;
  std::int64_t near_zero_pivot_warnings = 0;

  static Preconditioner identity() { return {}; }
};

/// Incomplete LU with zero fill-in: Gaussian elimination restricted to
/// pattern(A) plus the diagonal. An exactly-zero U pivot is replaced by 1
/// and counted, matching the usual invertibility fix.
template <class S>
Preconditioner<S> ilu0_factor(const CsrMatrix<S>& A) {
  if (A.nrows != A.ncols) throw std::invalid_argument("ilu0_factor: non-square matrix");
  const std::int64_t n = A.nrows;

  // Working copy with every diagonal position present (missing diagonals
  // become explicit zeros and hit the pivot rule).
  std::vector<std::vector<std::int64_t>> cols(n);
  std::vector<std::vector<S>> vals(n);
  for (std::int64_t i = 0; i < n; ++i) {
    bool have_diag = false;
    for (std::int64_t p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p) {
      if (A.col_idx[p] == i) have_diag = true;
    }
    for (std::int64_t p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p) {
      if (!have_diag && A.col_idx[p] > i) {
        cols[i].push_back(i);
        vals[i].push_back(S{});
        have_diag = true;
      }
      cols[i].push_back(A.col_idx[p]);
      vals[i].push_back(A.values[p]);
    }
    if (!have_diag) {
      cols[i].push_back(i);
      vals[i].push_back(S{});
    }
  }

  Preconditioner<S> P;
  P.kind = Preconditioner<S>::Kind::ilu0;

  std::vector<std::int64_t> pos(n, -1);  // column -> slot in current row
  std::vector<S> pivot(n, S{});
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < cols[i].size(); ++s) pos[cols[i][s]] = static_cast<std::int64_t>(s);
    double row_scale = 0.0;
    for (const S& v : vals[i]) row_scale += scalar_traits<S>::abs2(v);
    row_scale = std::sqrt(row_scale);

    for (std::size_t s = 0; s < cols[i].size(); ++s) {
      const std::int64_t k = cols[i][s];
      if (k >= i) break;
      const S factor = vals[i][s] / pivot[k];
      vals[i][s] = factor;
      // Eliminate with row k's upper part, restricted to this row's pattern.
      for (std::size_t t = 0; t < cols[k].size(); ++t) {
        const std::int64_t j = cols[k][t];
        if (j <= k) continue;
        const std::int64_t slot = pos[j];
        if (slot >= 0) vals[i][slot] -= factor * vals[k][t];
      }
    }
    S piv = vals[i][pos[i]];
    if (piv == S{}) {
      piv = S{1};
      vals[i][pos[i]] = piv;
      ++P.zero_pivot_replacements;
    } else if (abs_of(piv) < 1e-14 * row_scale) {
      ++P.near_zero_pivot_warnings;
    }
    pivot[i] = piv;
    for (std::int64_t c : cols[i]) pos[c] = -1;
  }

  std::vector<Triplet<S>> lt, ut;
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < cols[i].size(); ++s) {
      const std::int64_t j = cols[i][s];
      if (j < i)
        lt.emplace_back(i, j, vals[i][s]);
      else
        ut.emplace_back(i, j, vals[i][s]);
    }
  }
  P.L = csr_from_triplets<S>(n, n, std::move(lt));
  P.U = csr_from_triplets<S>(n, n, std::move(ut));
  return P;
}

/// M^{-1} v: identity returns v; ILU(0) does the forward then backward
/// triangular solves.
template <class S>
DenseVector<S> precond_apply(const Preconditioner<S>& P, const DenseVector<S>& v) {
  if (P.kind == Preconditioner<S>::Kind::identity) return v;
  if (P.L.nrows != static_cast<std::int64_t>(v.size()))
    throw std::invalid_argument("precond_apply: dimension mismatch");
  const std::int64_t n = P.L.nrows;
  DenseVector<S> y(v);
  for (std::int64_t i = 0; i < n; ++i) {
    S acc = v[i];
    for (std::int64_t p = P.L.row_ptr[i]; p < P.L.row_ptr[i + 1]; ++p)
      acc -= P.L.values[p] * y[P.L.col_idx[p]];
    y[i] = acc;
  }
  DenseVector<S> x(y);
  for (std::int64_t i = n - 1; i >= 0; --i) {
    S acc = y[i];
    S diag{};
    for (std::int64_t p = P.U.row_ptr[i]; p < P.U.row_ptr[i + 1]; ++p) {
      const std::int64_t j = P.U.col_idx[p];
      if (j == i)
        diag = P.U.values[p];
      else
        acc -= P.U.values[p] * x[j];
    }
    x[i] = acc / diag;
  }
  return x;
}

}  // namespace mlk

#endif  // MLK_PRECOND_HPP
