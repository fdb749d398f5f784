#pragma once

// Exact linear feasibility over the rationals: find x >= 0 with A x = b, by
// phase-one simplex with Bland's rule.  Dense arithmetic on cpp_rational is
// plenty for the small systems the trace search produces.

#include <cstddef>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace lpa {

using Rational = boost::multiprecision::cpp_rational;

/// Returns some nonnegative solution of A x = b, or nullopt when none
/// exists.  A is row-major, m x n; b has m entries.
inline std::optional<std::vector<Rational>> solve_feasibility(
    std::vector<std::vector<Rational>> A, std::vector<Rational> b) {
  const std::size_t m = A.size();
  const std::size_t n = m == 0 ? 0 : A[0].size();
  if (m == 0) return std::vector<Rational>(n, 0);

  // normalize to b >= 0, append artificial identity block
  std::vector<std::vector<Rational>> T(m,
                                       std::vector<Rational>(n + m + 1, 0));
  for (std::size_t i = 0; i < m; ++i) {
    bool neg = b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) T[i][j] = neg ? -A[i][j] : A[i][j];
    T[i][n + i] = 1;
    T[i][n + m] = neg ? -b[i] : b[i];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  // reduced costs for minimizing the sum of artificials
  std::vector<Rational> cost(n + m, 0);
  Rational w = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost[j] -= T[i][j];
    w += T[i][n + m];
  }

  for (;;) {
    // Bland: smallest column with negative reduced cost
    std::size_t enter = n + m;
    for (std::size_t j = 0; j < n + m; ++j)
      if (cost[j] < 0) {
        enter = j;
        break;
      }
    if (enter == n + m) break;

    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (T[i][enter] <= 0) continue;
      Rational ratio = T[i][n + m] / T[i][enter];
      if (leave == m || ratio < best ||
          (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // cannot happen: w is bounded below by zero

    // pivot on (leave, enter)
    Rational piv = T[leave][enter];
    for (auto& x : T[leave]) x /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || T[i][enter] == 0) continue;
      Rational f = T[i][enter];
      for (std::size_t j = 0; j <= n + m; ++j) T[i][j] -= f * T[leave][j];
    }
    Rational cf = cost[enter];
    if (cf != 0) {
      for (std::size_t j = 0; j < n + m; ++j) cost[j] -= cf * T[leave][j];
      w -= cf * T[leave][n + m];
    }
    basis[leave] = enter;
  }

  if (w != 0) return std::nullopt;
  std::vector<Rational> x(n, 0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = T[i][n + m];
  return x;
}

}  // namespace lpa
