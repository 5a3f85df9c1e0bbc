#pragma once

// Worked examples recomputed from the embedded fixtures.

#include <optional>
#include <string>

#include "cvn/graph.hpp"
#include "io.hpp"

namespace cvn::cli {

/// A subinterval of (0, 1) with possibly open ends; empty when lo > hi or
/// when lo == hi with an open end.
struct Interval {
  Rational lo = 0;
  Rational hi = 1;
  bool lo_open = true;
  bool hi_open = true;

  bool empty() const { return lo > hi || (lo == hi && (lo_open || hi_open)); }
  bool contains(const Rational& x) const {
    return (lo_open ? lo < x : lo <= x) && (hi_open ? x < hi : x <= hi);
  }
  std::string str() const;
};

/// Parameters alpha of the rose T_alpha (petals alpha, 1 - alpha) for which
/// d_R(P, T_alpha) + d_R(T_alpha, Q) = d_R(P, Q): some loop maximally
/// stretched from P to Q must also be maximally stretched from P to T_alpha
/// and from T_alpha to Q. Both constraints are linear in alpha.
struct Crossing {
  Interval first;   // from P to T_alpha
  Interval second;  // from T_alpha to Q
  Interval both;
};
Crossing rose_crossing(const MarkedMetricGraph& p, const MarkedMetricGraph& q);

Report repro_theta_pair();
Report repro_polygrowth();
Report repro_incompleteness();
Report repro_orbit();

/// Throws InvalidInput for an unknown name.
Report run_repro(const std::string& name);

/// Lambda_R(A_k, A_{k+m}) in the printed closed form and as recomputed here,
/// A_k the volume-one n-rose with one petal scaled by 1/k.
Rational incompleteness_printed_form(int n, int k, int m);
Rational incompleteness_recomputed_form(int n, int k, int m);

}  // namespace cvn::cli
