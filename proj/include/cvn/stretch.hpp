#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cvn/graph.hpp"
#include "cvn/plmap.hpp"

namespace cvn {

enum class LoopShape { circle, figure_eight, dumbbell };

std::string shape_name(LoopShape s);

/// An embedded circle, a figure-eight (two circles meeting in one vertex)
/// or a dumbbell (two disjoint circles joined by an arc).
struct CandidateLoop {
  LoopShape shape = LoopShape::circle;
  /// Cyclically reduced, in canonical rotation.
  EdgePath loop;
  EdgePath first;
  EdgePath second;
  EdgePath arc;
};

/// Least rotation over both orientations.
EdgePath canonical_rotation(const EdgePath& loop);

/// All embedded circles of g, each once, in canonical rotation.
std::vector<EdgePath> simple_cycles(const MarkedMetricGraph& g);

/// Every circle, figure-eight and dumbbell of a, deduplicated and sorted
/// by (shape, loop).
std::vector<CandidateLoop> enumerate_candidates(const MarkedMetricGraph& a);

/// l_B(w_gamma) / l_A(gamma) for each candidate, in candidate order.
std::vector<Rational> candidate_ratios(const MarkedMetricGraph& a,
                                       const std::vector<CandidateLoop>& candidates,
                                       const MarkedMetricGraph& b);
/// Single-threaded reference for candidate_ratios.
std::vector<Rational> candidate_ratios_serial(const MarkedMetricGraph& a,
                                              const std::vector<CandidateLoop>& candidates,
                                              const MarkedMetricGraph& b);

struct StretchFactor {
  Rational value;
  CandidateLoop witness;
  /// Indices into the candidate list of every candidate attaining value.
  std::vector<std::size_t> attained;
};

/// Lambda_R(A, B) as the largest candidate ratio; the witness is the first
/// maximiser in candidate order. Throws RankMismatch.
StretchFactor lambda_r(const MarkedMetricGraph& a, const MarkedMetricGraph& b);
StretchFactor lambda_r(const MarkedMetricGraph& a, const std::vector<CandidateLoop>& candidates,
                       const MarkedMetricGraph& b);

struct StretchReport {
  /// Factors of the graphs as given.
  Rational lambda_r;
  Rational lambda_l;
  Rational lambda;
  /// Factors between the volume-one representatives.
  Rational lambda_r_normalized;
  Rational lambda_l_normalized;
  double d = 0;
  double d_r = 0;
  double d_l = 0;
  CandidateLoop witness_r;
  CandidateLoop witness_l;
};

StretchReport stretch_report(const MarkedMetricGraph& a, const MarkedMetricGraph& b);

/// Lambda_R between the volume-one representatives, exp(d_R).
Rational lambda_r_normalized(const MarkedMetricGraph& a, const MarkedMetricGraph& b);

struct CancellationBound {
  Rational bound;  // K + lambda vol(A)
  Rational k;
  Rational length_cap;
  std::size_t pairs = 0;
  /// True when the pair cap stopped the search; K is then a lower bound.
  bool truncated = false;
  EdgePath alpha;
  EdgePath beta;
};

struct CancellationOptions {
  /// Loop-length cap; 0 selects 4 lambda vol(A) Lambda_L(A, B).
  Rational length_cap = 0;
  std::size_t max_pairs = 1000000;
  bool parallel = true;
};

/// Largest cancellation (|f a| + |f b| - |f ab|)/2 over pairs of loops at a
/// common vertex with a.b cyclically reduced, plus lambda vol(A).
CancellationBound bounded_cancellation_bound(const PLMap& f,
                                             const CancellationOptions& options = {});

}  // namespace cvn
