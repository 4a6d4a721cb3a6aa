#ifndef MLK_CSR_HPP
#define MLK_CSR_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "mlk/dense.hpp"
#include "mlk/scalar.hpp"

namespace mlk {

/// Compressed sparse row matrix. Columns are sorted ascending within each
/// row and hold no duplicates; immutable once built.
template <class S>
struct CsrMatrix {
  std::int64_t nrows = 0;
  std::int64_t ncols = 0;
  std::vector<std::int64_t> row_ptr;  // length nrows+1, row_ptr[0] == 0
  std::vector<std::int64_t> col_idx;
  std::vector<S> values;

  std::int64_t nnz() const { return static_cast<std::int64_t>(values.size()); }
};

template <class S>
using Triplet = std::tuple<std::int64_t, std::int64_t, S>;

/// Build a CSR matrix from (row, col, value) entries. Duplicates are summed.
template <class S>
CsrMatrix<S> csr_from_triplets(std::int64_t nrows, std::int64_t ncols,
                               std::vector<Triplet<S>> entries) {
  for (const auto& [r, c, v] : entries) {
    (void)v;
    if (r < 0 || r >= nrows || c < 0 || c >= ncols)
      throw std::invalid_argument("csr_from_triplets: index out of range");
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) <
           std::tie(std::get<0>(b), std::get<1>(b));
  });
  CsrMatrix<S> A;
  A.nrows = nrows;
  A.ncols = ncols;
  A.row_ptr.assign(static_cast<std::size_t>(nrows) + 1, 0);
  for (std::size_t i = 0; i < entries.size();) {
    auto [r, c, v] = entries[i];
    std::size_t j = i + 1;
    while (j < entries.size() && std::get<0>(entries[j]) == r &&
           std::get<1>(entries[j]) == c) {
      v += std::get<2>(entries[j]);
      ++j;
    }
    A.col_idx.push_back(c);
    A.values.push_back(v);
    ++A.row_ptr[static_cast<std::size_t>(r) + 1];
    i = j;
  }
  for (std::int64_t r = 0; r < nrows; ++r) A.row_ptr[r + 1] += A.row_ptr[r];
  return A;
}

/// A*v with row-major, column-ascending accumulation order.
template <class S>
DenseVector<S> spmv(const CsrMatrix<S>& A, const DenseVector<S>& v) {
  if (A.ncols != static_cast<std::int64_t>(v.size()))
    throw std::invalid_argument("spmv: dimension mismatch");
  DenseVector<S> out(static_cast<std::size_t>(A.nrows), S{});
  for (std::int64_t i = 0; i < A.nrows; ++i) {
    S acc{};
    for (std::int64_t p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p)
      acc += A.values[p] * v[A.col_idx[p]];
    out[i] = acc;
  }
  return out;
}

/// A^H * v (conjugate-transpose product; plain transpose for real scalars).
template <class S>
DenseVector<S> spmv_adjoint(const CsrMatrix<S>& A, const DenseVector<S>& v) {
  if (A.nrows != static_cast<std::int64_t>(v.size()))
    throw std::invalid_argument("spmv_adjoint: dimension mismatch");
  DenseVector<S> out(static_cast<std::size_t>(A.ncols), S{});
  for (std::int64_t i = 0; i < A.nrows; ++i) {
    const S vi = v[i];
    for (std::int64_t p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p)
      out[A.col_idx[p]] += conj_of(A.values[p]) * vi;
  }
  return out;
}

/// Identity matrix in CSR form.
template <class S>
CsrMatrix<S> csr_identity(std::int64_t n) {
  std::vector<Triplet<S>> t;
  t.reserve(n);
  for (std::int64_t i = 0; i < n; ++i) t.emplace_back(i, i, S{1});
  return csr_from_triplets<S>(n, n, std::move(t));
}

}  // namespace mlk

#endif  // MLK_CSR_HPP
