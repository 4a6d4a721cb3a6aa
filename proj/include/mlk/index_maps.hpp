#ifndef MLK_INDEX_MAPS_HPP
#define MLK_INDEX_MAPS_HPP

#include <stdexcept>

namespace mlk {

/// Cycle number of iteration k: floor((k-1)/n) with floor toward -inf.
/// Integer division in C++ truncates toward zero, so negative numerators
/// are adjusted explicitly.
inline long g_index(long n, long k) {
  if (n < 1) throw std::invalid_argument("g_index: n must be >= 1");
  long num = k - 1;
  long q = num / n;
  if (num % n != 0 && num < 0) --q;
  return q;
}

/// Within-cycle position of iteration k, always in [1, n].
inline long r_index(long n, long k) {
  if (n < 1) throw std::invalid_argument("r_index: n must be >= 1");
  return k - n * g_index(n, k);
}

}  // namespace mlk

#endif  // MLK_INDEX_MAPS_HPP
