#include "cvn/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cvn {

Rational exp_distance(const MarkedMetricGraph& a, const MarkedMetricGraph& b, PathMetric metric) {
  if (metric == PathMetric::right) return lambda_r_normalized(a, b);
  return lambda_r(a, b).value * lambda_r(b, a).value;
}

QuasiGeodesicResult check_quasi_geodesic(const std::vector<MarkedMetricGraph>& samples,
                                         const Rational& lambda, const Rational& epsilon,
                                         PathMetric metric) {
  if (lambda <= 0 || epsilon < 0) throw InvalidInput("need lambda > 0 and epsilon >= 0");
  const std::size_t n = samples.size();
  std::vector<std::vector<Rational>> e(n, std::vector<Rational>(n, Rational(1)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e[i][j] = exp_distance(samples[i], samples[j], metric);

  // exp of the arc-length parameter difference between i and j.
  std::vector<Rational> arc(n, Rational(1));
  for (std::size_t i = 1; i < n; ++i) arc[i] = arc[i - 1] * e[i - 1][i];

  const double lam = lambda.get_d();
  const double eps = epsilon.get_d();
  const long p = lambda.get_num().get_si();
  const long q = lambda.get_den().get_si();
  QuasiGeodesicResult r;
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Rational span = arc[j] / arc[i];
      double x = log_of(span);
      double d = log_of(e[i][j]);
      double margin = std::min(d - x / lam + eps, lam * x + eps - d);
      bool ok;
      if (epsilon == 0) {
        // span^(1/lambda) <= e <= span^lambda, raised to the power q.
        ok = pow(e[i][j], static_cast<unsigned>(q)) <= pow(span, static_cast<unsigned>(p)) &&
             pow(span, static_cast<unsigned>(q)) <= pow(e[i][j], static_cast<unsigned>(p));
      } else {
        ok = margin >= 0;
      }
      if (margin < r.worst_margin) {
        r.worst_margin = margin;
        if (r.ok) {
          r.first = i;
          r.second = j;
        }
      }
      if (!ok && r.ok) {
        r.ok = false;
        r.first = i;
        r.second = j;
      }
    }
  if (n < 2) r.worst_margin = 0;
  return r;
}

GeodesicCheck check_dr_geodesic(const std::vector<MarkedMetricGraph>& points) {
  const std::size_t n = points.size();
  if (n < 3) throw InvalidInput("the geodesic check needs at least 3 points");
  std::vector<std::vector<Rational>> e(n, std::vector<Rational>(n, Rational(1)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e[i][j] = lambda_r_normalized(points[i], points[j]);
  GeodesicCheck g;
  g.witness = word_of_loop(points.front(), lambda_r(points.front(), points.back()).witness.loop);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (e[i][k] != e[i][j] * e[j][k]) return {false, {i, j, k}, g.witness};
  return g;
}

}  // namespace cvn
