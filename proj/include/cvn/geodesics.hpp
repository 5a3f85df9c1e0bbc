#pragma once

// Checkers for the four-point property, quasi-geodesicity and d_R
// triangle equalities on sampled paths.

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "cvn/graph.hpp"
#include "cvn/stretch.hpp"

namespace cvn {

struct FourPointResult {
  bool ok = true;
  /// s <= x <= y <= t with d(s, t) < d(x, y), when !ok.
  std::array<std::size_t, 4> violation{};
};

/// d(s, t) >= d(x, y) for all sample indices s <= x <= y <= t. `dist(i, j)`
/// may return any totally ordered type (a monotone image of the distance is
/// enough). Needs at least 4 samples.
template <class Dist>
FourPointResult check_four_point(std::size_t n, Dist dist) {
  if (n < 4) throw InvalidInput("the four-point check needs at least 4 samples");
  using D = decltype(dist(std::size_t{0}, std::size_t{0}));
  // best[s][t]: largest d(x, y) with s <= x < y <= t, and where it is.
  std::vector<std::vector<D>> d(n, std::vector<D>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = dist(i, j);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> arg(
      n, std::vector<std::pair<std::size_t, std::size_t>>(n));
  for (std::size_t len = 1; len < n; ++len)
    for (std::size_t s = 0; s + len < n; ++s) {
      std::size_t t = s + len;
      auto best = std::make_pair(s, t);
      auto consider = [&](std::pair<std::size_t, std::size_t> p) {
        if (d[best.first][best.second] < d[p.first][p.second]) best = p;
      };
      if (len > 1) {
        consider(arg[s + 1][t]);
        consider(arg[s][t - 1]);
      }
      arg[s][t] = best;
      if (best != std::make_pair(s, t) && d[s][t] < d[best.first][best.second])
        return {false, {s, best.first, best.second, t}};
    }
  return {};
}

enum class PathMetric { symmetric, right };

struct QuasiGeodesicResult {
  bool ok = true;
  /// Smallest slack over all pairs and both inequalities (natural log scale).
  double worst_margin = 0;
  std::size_t first = 0;
  std::size_t second = 0;
};

/// (1/lambda)|x-y| - eps <= dist <= lambda|x-y| + eps over all sample pairs,
/// x the arc-length parameter (sum of consecutive distances). With eps = 0
/// both sides are compared exactly as powers of stretching factors.
QuasiGeodesicResult check_quasi_geodesic(const std::vector<MarkedMetricGraph>& samples,
                                         const Rational& lambda, const Rational& epsilon,
                                         PathMetric metric = PathMetric::symmetric);

/// exp of the distance: Lambda(A, B) for d, the normalised Lambda_R for d_R.
Rational exp_distance(const MarkedMetricGraph& a, const MarkedMetricGraph& b, PathMetric metric);

struct GeodesicCheck {
  bool ok = true;
  /// Offending triple i < j < k when !ok.
  std::array<std::size_t, 3> violation{};
  /// Candidate realising Lambda_R(first, last), as a word.
  Word witness;
};

/// d_R(x, z) = d_R(x, y) + d_R(y, z) for every ordered triple, as exact
/// products of normalised stretching factors. Needs at least 3 points.
GeodesicCheck check_dr_geodesic(const std::vector<MarkedMetricGraph>& points);

}  // namespace cvn
