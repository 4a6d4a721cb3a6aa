#ifndef MLK_SCALAR_HPP
#define MLK_SCALAR_HPP

#include <cmath>
#include <complex>
#include <type_traits>

namespace mlk {

/// Traits for the scalar field the kernels and solvers are generic over.
/// Instantiated for double (real field) and std::complex<double>.
/// The real instantiation pays no conjugation cost.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  using real_type = double;
  static constexpr bool is_complex = false;
  static double conj(double x) { return x; }
  static double real(double x) { return x; }
  static double imag(double) { return 0.0; }
  static double abs(double x) { return std::abs(x); }
  static double abs2(double x) { return x * x; }
};

template <>
struct scalar_traits<std::complex<double>> {
  using real_type = double;
  static constexpr bool is_complex = true;
  static std::complex<double> conj(std::complex<double> x) { return std::conj(x); }
  static double real(std::complex<double> x) { return x.real(); }
  static double imag(std::complex<double> x) { return x.imag(); }
  static double abs(std::complex<double> x) { return std::abs(x); }
  static double abs2(std::complex<double> x) { return std::norm(x); }
};

template <class S>
inline S conj_of(S x) {
  return scalar_traits<S>::conj(x);
}

template <class S>
inline double abs_of(S x) {
  return scalar_traits<S>::abs(x);
}

}  // namespace mlk

#endif  // MLK_SCALAR_HPP
