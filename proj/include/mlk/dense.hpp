#ifndef MLK_DENSE_HPP
#define MLK_DENSE_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mlk/scalar.hpp"

namespace mlk {

template <class S>
using DenseVector = std::vector<S>;

/// u^H v, conjugate-linear in the first argument.
template <class S>
S dot(const DenseVector<S>& u, const DenseVector<S>& v) {
  if (u.size() != v.size()) throw std::invalid_argument("dot: length mismatch");
  S acc{};
  for (std::size_t i = 0; i < u.size(); ++i) acc += conj_of(u[i]) * v[i];
  return acc;
}

/// Euclidean norm, accumulated in double regardless of scalar type.
template <class S>
double norm2(const DenseVector<S>& v) {
  double acc = 0.0;
  for (const S& x : v) acc += scalar_traits<S>::abs2(x);
  return std::sqrt(acc);
}

/// alpha*x + y as a new vector.
template <class S>
DenseVector<S> axpy(S alpha, const DenseVector<S>& x, const DenseVector<S>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: length mismatch");
  DenseVector<S> out(y);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += alpha * x[i];
  return out;
}

// In-place forms used by the solver loops.

/// y += alpha*x
template <class S>
void axpy_into(DenseVector<S>& y, S alpha, const DenseVector<S>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

/// y = x + alpha*z; y may alias x or z.
template <class S>
void set_xpay(DenseVector<S>& y, const DenseVector<S>& x, S alpha, const DenseVector<S>& z) {
  if (x.size() != z.size()) throw std::invalid_argument("set_xpay: length mismatch");
  if (y.size() != x.size() && &y != &x && &y != &z) y.resize(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] + alpha * z[i];
}

/// y = alpha*y
template <class S>
void scale(DenseVector<S>& y, S alpha) {
  for (auto& v : y) v *= alpha;
}

/// y = x - z; y may alias either argument.
template <class S>
void set_sub(DenseVector<S>& y, const DenseVector<S>& x, const DenseVector<S>& z) {
  if (x.size() != z.size()) throw std::invalid_argument("set_sub: length mismatch");
  if (y.size() != x.size() && &y != &x && &y != &z) y.resize(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] - z[i];
}

template <class S>
DenseVector<S> zeros_like(const DenseVector<S>& v) {
  return DenseVector<S>(v.size(), S{});
}

}  // namespace mlk

#endif  // MLK_DENSE_HPP
