#ifndef MLK_COUNTERS_HPP
#define MLK_COUNTERS_HPP

#include <cstdint>

namespace mlk {

/// Operation counters accumulated by a solve. Monotone nondecreasing.
/// Norms and convergence checks are not counted as dot products.
struct OpCounters {
  std::int64_t matvec_A = 0;
  std::int64_t matvec_AH = 0;
  std::int64_t precond_applies = 0;
  std::int64_t dots = 0;
  std::int64_t axpys = 0;
};

}  // namespace mlk

#endif  // MLK_COUNTERS_HPP
