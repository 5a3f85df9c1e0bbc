#pragma once

#include <string>
#include <vector>

#include "cvn/graph.hpp"
#include "cvn/plmap.hpp"
#include "cvn/stretch.hpp"

namespace cvn {

/// A0, the volume-one target and the map between them, isometric on edges.
/// Every edge of A0 maps onto a segment of a single target edge.
struct FoldingSetup {
  MarkedMetricGraph source;  // A0
  MarkedMetricGraph target;  // B normalised to volume one
  PLMap map;
  /// Reduced loop of A0 realising Lambda_R(A0, target) = 1, never folded.
  EdgePath witness;
  Word witness_word;
  /// Certified Lambda_R(A, B) and the moves the optimiser used.
  Rational lambda;
  int moves = 0;
};

/// Optimises a PL map A -> B, shrinks every edge to the length of its image
/// in the volume-one target (contracting edges with constant image) and
/// subdivides so that edges map into single target edges.
/// Propagates BudgetExhausted from the optimiser.
FoldingSetup prepare_folding_setup(const MarkedMetricGraph& a, const MarkedMetricGraph& b,
                                   const OptimizeOptions& options = {});

enum class FoldStrategy {
  simultaneous,  // every vertex folds at once
  single_vertex  // only the lowest vertex with a folding turn
};

/// Two germs at a vertex with the same initial image, being identified.
struct FoldTurn {
  Vertex vertex = 0;
  OrientedEdge first = 0;
  OrientedEdge second = 0;
};

/// Folding turns under f: unordered pairs of distinct germs at a vertex
/// whose images leave along the same target direction (for single_vertex,
/// only at the lowest vertex having any).
std::vector<FoldTurn> folding_turns(const PLMap& f,
                                    FoldStrategy strategy = FoldStrategy::simultaneous);

struct FoldingPath {
  FoldingSetup setup;
  FoldStrategy strategy = FoldStrategy::simultaneous;
  /// times[0] = 0 < times[1] < ... ; the last entry is the end time.
  std::vector<Rational> times;
  /// Graph and map at each time; maps are isometric on edges.
  std::vector<MarkedMetricGraph> snapshots;
  std::vector<PLMap> maps;

  std::size_t event_count() const { return times.size() - 1; }
  const Rational& end_time() const { return times.back(); }
};

/// Runs the folding to the end. Throws InvariantViolation when a fold would
/// identify edges with different images or kill a loop, BudgetExhausted
/// after max_events.
FoldingPath fast_fold(const FoldingSetup& setup,
                      FoldStrategy strategy = FoldStrategy::simultaneous,
                      int max_events = 100000);

struct PathSample {
  MarkedMetricGraph graph;
  PLMap map;
  FoldStrategy strategy = FoldStrategy::simultaneous;
};

/// The point at time t, 0 <= t <= end_time. Partial folds keep the new
/// vertices they create. Throws InvalidInput when t is out of range.
PathSample sample_path(const FoldingPath& path, const Rational& t);

/// Unoriented passages of a cyclically reduced loop through folding turns.
int multiplicity(const PLMap& f, const EdgePath& loop,
                 FoldStrategy strategy = FoldStrategy::simultaneous);
/// Same, with the loop given as a conjugacy class.
int multiplicity(const PLMap& f, const Word& w,
                 FoldStrategy strategy = FoldStrategy::simultaneous);

struct Speeds {
  Rational local;        // 2 mu / l for the candidate minimising l / mu
  Rational toward;       // 2 mu / l for a loop realising Lambda_R(target, A_t)
  Rational ratio;        // toward / local
  EdgePath local_loop;   // in A_t
  Word toward_word;      // a target candidate word
};

/// Right derivatives at time t. Throws InvalidInput at the end time.
Speeds speeds(const FoldingPath& path, const Rational& t);
Speeds speeds(const PathSample& sample);

struct Systole {
  Rational value;  // shortest circle over volume
  EdgePath loop;
  bool thin = false;
};

Systole systole_and_thin_test(const MarkedMetricGraph& g, const Rational& epsilon);

/// One trace row.
struct TraceRow {
  Rational time;
  Rational volume;
  Rational systole;
  Rational local_speed;   // zero at the end time
  Rational toward_speed;  // zero at the end time
  Rational lambda_to_target;  // exp(d_R(A_t, target))
  double d_r_to_target = 0;
};

TraceRow trace_row(const FoldingPath& path, const Rational& t);

}  // namespace cvn
