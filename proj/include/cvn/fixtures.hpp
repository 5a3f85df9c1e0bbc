#pragma once

// Named graphs used by the reproduction commands and the tests.

#include "cvn/graph.hpp"

namespace cvn::fixtures {

/// Theta graph: three edges from vertex 0 to vertex 1, labels (a, 1, b),
/// marking a = e1 e2^-1, b = e3 e2^-1.
MarkedMetricGraph theta(const Rational& l1, const Rational& l2, const Rational& l3);

/// Two loops joined by a separating edge: loop a at vertex 0, bridge 0->1,
/// loop b at vertex 1. Marking a = e1, b = e2 e3 e2^-1.
MarkedMetricGraph barbell(const Rational& loop_a, const Rational& bridge, const Rational& loop_b);

MarkedMetricGraph rose2(const Rational& a, const Rational& b);

/// The two volume-one theta graphs X, Y and the rose T_alpha on the shared
/// edge of their simplices.
MarkedMetricGraph wc_x();
MarkedMetricGraph wc_y();
MarkedMetricGraph wc_t(const Rational& alpha);

/// a -> a, b -> ba.
AutomorphismPair polynomial_phi();
/// a -> ab, b -> a.
AutomorphismPair exponential_phi();

/// Rank-2 rose with both petals of length k+1.
MarkedMetricGraph polygrowth_source(int k);
/// phi^k of the unit rose, phi = polynomial_phi().
MarkedMetricGraph polygrowth_target(int k);

/// Volume-one rank-n rose with one petal scaled by 1/k.
MarkedMetricGraph thin_rose(int n, int k);

}  // namespace cvn::fixtures
