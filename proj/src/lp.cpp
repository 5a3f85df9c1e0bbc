#include "lp.hpp"

#include <cstddef>

#include "cvn/errors.hpp"

namespace cvn::detail {

std::optional<LpSolution> maximize(const std::vector<std::vector<Rational>>& a,
                                   const std::vector<Rational>& b,
                                   const std::vector<Rational>& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  // Tableau columns: n structural, m slack, then the right-hand side.
  std::vector<std::vector<Rational>> t(m + 1, std::vector<Rational>(n + m + 1, Rational(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (b[i] < 0) throw InvalidInput("simplex needs a feasible origin");
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1;
    t[i][n + m] = b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) t[m][j] = -c[j];

  while (true) {
    std::size_t enter = n + m;
    for (std::size_t j = 0; j < n + m; ++j)
      if (t[m][j] < 0) {
        enter = j;
        break;
      }
    if (enter == n + m) break;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rational ratio = t[i][n + m] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) return std::nullopt;
    Rational p = t[leave][enter];
    for (auto& x : t[leave]) x /= p;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Rational k = t[i][enter];
      for (std::size_t j = 0; j <= n + m; ++j) t[i][j] -= k * t[leave][j];
    }
    basis[leave] = enter;
  }

  LpSolution s{t[m][n + m], std::vector<Rational>(n, Rational(0))};
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) s.x[basis[i]] = t[i][n + m];
  return s;
}

}  // namespace cvn::detail
