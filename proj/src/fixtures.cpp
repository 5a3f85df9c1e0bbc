#include "cvn/fixtures.hpp"

#include <vector>

namespace cvn::fixtures {

namespace {

Word gen(int i) { return Word::generator(i, 2); }

}  // namespace

MarkedMetricGraph theta(const Rational& l1, const Rational& l2, const Rational& l3) {
  std::vector<EdgeData> edges{{0, 1, l1, gen(1)}, {0, 1, l2, Word(2)}, {0, 1, l3, gen(2)}};
  return MarkedMetricGraph(2, 2, std::move(edges), 0,
                           {{forward_of(0), reversed(forward_of(1))},
                            {forward_of(2), reversed(forward_of(1))}});
}

MarkedMetricGraph barbell(const Rational& loop_a, const Rational& bridge, const Rational& loop_b) {
  std::vector<EdgeData> edges{{0, 0, loop_a, gen(1)}, {0, 1, bridge, Word(2)}, {1, 1, loop_b, gen(2)}};
  return MarkedMetricGraph(2, 2, std::move(edges), 0,
                           {{forward_of(0)},
                            {forward_of(1), forward_of(2), reversed(forward_of(1))}});
}

MarkedMetricGraph rose2(const Rational& a, const Rational& b) {
  std::vector<Rational> petals{a, b};
  return make_rose(petals);
}

MarkedMetricGraph wc_x() { return theta(Rational(1, 6), Rational(1, 3), Rational(1, 2)); }

MarkedMetricGraph wc_y() {
  // E, F, G with a = E F^-1 and b = F G^-1.
  std::vector<EdgeData> edges{{0, 1, Rational(1, 2), gen(1)},
                              {0, 1, Rational(1, 3), Word(2)},
                              {0, 1, Rational(1, 6), gen(2).inverse()}};
  return MarkedMetricGraph(2, 2, std::move(edges), 0,
                           {{forward_of(0), reversed(forward_of(1))},
                            {forward_of(1), reversed(forward_of(2))}});
}

MarkedMetricGraph wc_t(const Rational& alpha) { return rose2(alpha, 1 - alpha); }

AutomorphismPair polynomial_phi() {
  return {2, {gen(1), gen(2) * gen(1)}, {gen(1), gen(2) * gen(1).inverse()}};
}

AutomorphismPair exponential_phi() {
  return {2, {gen(1) * gen(2), gen(1)}, {gen(2), gen(2).inverse() * gen(1)}};
}

MarkedMetricGraph polygrowth_source(int k) { return rose2(k + 1, k + 1); }

MarkedMetricGraph polygrowth_target(int k) {
  return apply_automorphism_to_marking(rose2(1, 1), polynomial_phi().power(k));
}

MarkedMetricGraph thin_rose(int n, int k) {
  std::vector<Rational> petals(static_cast<std::size_t>(n), Rational(k));
  petals[0] = 1;
  return normalize_volume(make_rose(petals)).graph;
}

}  // namespace cvn::fixtures
