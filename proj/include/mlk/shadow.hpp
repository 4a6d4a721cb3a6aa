#ifndef MLK_SHADOW_HPP
#define MLK_SHADOW_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "mlk/dense.hpp"
#include "mlk/scalar.hpp"
#include "mlk/solver_types.hpp"

namespace mlk {

/// Block of left projection vectors q_1..q_n. Column 0 is always the
/// initial residual; deferred columns (adaptive mode) start empty and are
/// filled by the solver as iterates become available.
template <class S>
struct ShadowBlock {
  std::vector<DenseVector<S>> cols;
  bool adaptive = false;
};

namespace detail {

inline double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

template <class S>
void fill_shadow_column(DenseVector<S>& q, ShadowMode mode, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (auto& v : q) {
    if constexpr (scalar_traits<S>::is_complex) {
      switch (mode) {
        case ShadowMode::complex_randn_r0:
          v = S{gauss(rng), gauss(rng)};
          break;
        case ShadowMode::complex_sign_r0:
          v = S{sign_of(gauss(rng)), sign_of(gauss(rng))};
          break;
        case ShadowMode::randn_r0:
          v = S{gauss(rng), 0.0};
          break;
        case ShadowMode::sign_r0:
          v = S{sign_of(gauss(rng)), 0.0};
          break;
        default:
          throw ConfigurationError("shadow: mode does not generate columns");
      }
    } else {
      switch (mode) {
        case ShadowMode::randn_r0:
          v = gauss(rng);
          break;
        case ShadowMode::sign_r0:
          v = sign_of(gauss(rng));
          break;
        default:
          throw ConfigurationError("shadow: mode requires a complex scalar type");
      }
    }
  }
}

}  // namespace detail

/// Builds q_1..q_n with q_1 = r0. Random columns are drawn from
/// mt19937_64(seed), column-major order, so the block is reproducible for a
/// fixed (seed, N, n, mode). adaptive_fom leaves columns 2..n unset.
template <class S>
ShadowBlock<S> build_shadow_block(const DenseVector<S>& r0, int n, ShadowMode mode,
                                  std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("shadow: n must be >= 1");
  ShadowBlock<S> blk;
  blk.cols.assign(static_cast<std::size_t>(n), DenseVector<S>{});
  blk.cols[0] = r0;
  if (mode == ShadowMode::adaptive_fom) {
    blk.adaptive = true;
    return blk;
  }
  if (mode == ShadowMode::explicit_q)
    throw std::invalid_argument("shadow: explicit mode needs caller-supplied columns");
  std::mt19937_64 rng(seed);
  for (int j = 1; j < n; ++j) {
    blk.cols[static_cast<std::size_t>(j)].assign(r0.size(), S{});
    detail::fill_shadow_column(blk.cols[static_cast<std::size_t>(j)], mode, rng);
  }
  return blk;
}

}  // namespace mlk

#endif  // MLK_SHADOW_HPP
