#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "mlk/index_maps.hpp"

using mlk::g_index;
using mlk::r_index;

TEST_CASE("cycle index: pinned values") {
  CHECK(g_index(3, 4) == 1);
  CHECK(g_index(3, 0) == -1);
  CHECK(r_index(3, 0) == 3);
  CHECK(r_index(3, 7) == 1);
}

TEST_CASE("cycle index: k = j*n + i decomposes as (j, i)") {
  for (long n = 1; n <= 8; ++n)
    for (long j = -3; j <= 10; ++j)
      for (long i = 1; i <= n; ++i) {
        CHECK(g_index(n, j * n + i) == j);
        CHECK(r_index(n, j * n + i) == i);
      }
}

TEST_CASE("cycle index: n = 0 rejected") {
  CHECK_THROWS_AS(g_index(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(r_index(0, 1), std::invalid_argument);
}

TEST_CASE("cycle index: shifting k by n advances the cycle only") {
  for (long n = 1; n <= 8; ++n)
    for (long k = -2 * n; k <= 10 * n; ++k) {
      CHECK(g_index(n, k + n) == g_index(n, k) + 1);
      CHECK(r_index(n, k + n) == r_index(n, k));
    }
}

TEST_CASE("cycle index: residue position always lies in [1, n]") {
  for (long n = 1; n <= 8; ++n)
    for (long k = -2 * n; k <= 10 * n; ++k) {
      CHECK(r_index(n, k) >= 1);
      CHECK(r_index(n, k) <= n);
    }
}

TEST_CASE("cycle index: end-of-cycle step rule") {
  for (long n = 1; n <= 8; ++n)
    for (long k = 1; k <= 10 * n; ++k) {
      if (r_index(n, k) == n)
        CHECK(g_index(n, k + 1) == g_index(n, k) + 1);
      else
        CHECK(g_index(n, k + 1) == g_index(n, k));
    }
}

// Exhaustive enumeration of the remaining cycle-bookkeeping identities the
// solver recurrences lean on, over n <= 6 and k <= 6n.
TEST_CASE("cycle index: window identities for the recurrence ranges") {
  for (long n = 1; n <= 6; ++n) {
    for (long k = 1; k <= 6 * n; ++k) {
      const long g = g_index(n, k);
      const long lo = std::max(k - n, 0L);
      // Left part of the update window sits one cycle behind k+1.
      for (long s = lo; s <= g * n - 1; ++s)
        CHECK(g_index(n, s + 1) + 1 == g_index(n, k + 1));
      // Right part shares the cycle of k itself.
      for (long s = g * n; s <= k - 1; ++s) {
        CHECK(g_index(n, s + 1) == g_index(n, g * n + 1));
        CHECK(g_index(n, s + 1) == g);
      }
      // The left window is empty at cycle boundaries and in the first cycle.
      if (r_index(n, k) == n || g == 0) CHECK(lo > g * n - 1);
    }
  }
}
