#pragma once

#include <optional>
#include <vector>

#include "cvn/graph.hpp"

namespace cvn {

/// A point of a metric graph: either a vertex or an interior point of an
/// edge at `offset` from its origin (0 < offset < length).
struct Point {
  Vertex vertex = -1;
  EdgeId edge = -1;
  Rational offset;

  static Point at_vertex(Vertex v) { return {v, -1, 0}; }
  bool is_vertex() const noexcept { return vertex >= 0; }
  friend bool operator==(const Point& x, const Point& y) {
    return x.vertex == y.vertex && x.edge == y.edge && x.offset == y.offset;
  }
};

/// Point at distance s along oriented edge oe (0 <= s <= length).
Point point_along(const MarkedMetricGraph& g, OrientedEdge oe, const Rational& s);

/// The portion [from, to] of an oriented edge, offsets measured from its
/// origin; 0 <= from < to <= length.
struct Segment {
  OrientedEdge edge = 0;
  Rational from;
  Rational to;

  Rational length() const { return to - from; }
  friend bool operator==(const Segment& x, const Segment& y) {
    return x.edge == y.edge && x.from == y.from && x.to == y.to;
  }
};

using SegmentPath = std::vector<Segment>;

Segment reversed(const MarkedMetricGraph& g, const Segment& s);
SegmentPath reversed(const MarkedMetricGraph& g, const SegmentPath& p);
Rational path_length(const SegmentPath& p);
Point start_point(const MarkedMetricGraph& g, const Segment& s);
Point end_point(const MarkedMetricGraph& g, const Segment& s);

/// Full-edge segments of an edge path.
SegmentPath segments_of(const MarkedMetricGraph& g, const EdgePath& p);

/// The edge path when every segment is a full edge, otherwise nullopt.
std::optional<EdgePath> as_edge_path(const MarkedMetricGraph& g, const SegmentPath& p);

/// Cancels partial backtracks and merges contiguous pieces of one edge.
/// mode=loop also cancels across the wrap (the result may start anywhere
/// on the loop).
SegmentPath tighten(const MarkedMetricGraph& g, const SegmentPath& p, TightenMode mode);

/// PL representative of tau_B tau_A^{-1}: linear on edges, vertex images
/// arbitrary points of the target.
struct PLMap {
  MarkedMetricGraph source;
  MarkedMetricGraph target;
  std::vector<Point> vertex_image;
  /// Tight image of each source edge in its forward orientation.
  std::vector<SegmentPath> edge_image;
  /// Tight path from the target basepoint to the image of the source
  /// basepoint; conjugating pushed petals by it reads back a_i exactly.
  SegmentPath base_path;

  SegmentPath image(OrientedEdge oe) const;
  /// S_{f,e}: image length over edge length.
  Rational edge_stretch(EdgeId e) const;
};

/// Endpoint compatibility, reversal consistency and the homotopy-class
/// witness on every petal.
ValidationReport validate_pl_map(const PLMap& f);

/// Every vertex to the target basepoint, each edge to the target path of
/// its label word.
PLMap initial_pl_map(const MarkedMetricGraph& a, const MarkedMetricGraph& b);

/// Image of a source path, concatenated and tightened.
SegmentPath push_path(const PLMap& f, const EdgePath& p);

/// Length of the cyclically tightened image of a source loop.
Rational loop_image_length(const PLMap& f, const EdgePath& loop);

struct StretchAnalysis {
  Rational s_f;
  std::vector<Rational> per_edge;
  std::vector<EdgeId> a_max;
  /// f-boundary of A_max: vertices where all A_max germs share the same
  /// initial target direction.
  std::vector<Vertex> boundary;
};

StretchAnalysis stretch_analysis(const PLMap& f);

struct Optimality {
  bool optimal = true;
  std::vector<Vertex> offending;
};
Optimality is_optimal(const PLMap& f);

/// Length t0 of the Next_v move: the first breakpoint among edge exhaustion
/// along the common direction and crossings between the stretch of an edge
/// outside A_max and one inside it. Throws InvalidInput if v is not in the
/// f-boundary.
Rational next_v_step(const PLMap& f, Vertex v);

/// f with v moved backward by `t` along the common direction of its A_max
/// germs (t <= next_v_step for a linear move).
PLMap move_vertex(const PLMap& f, Vertex v, const Rational& t);

PLMap next_v(const PLMap& f, Vertex v);

/// Simultaneous motion of several vertex images, each along one germ at a
/// fixed speed, lowering every edge of A_max at rate at least `rate`.
struct JointMove {
  std::vector<OrientedEdge> direction;  // -1: vertex stays
  std::vector<Rational> start;          // offset of f(v) along direction
  std::vector<Rational> speed;
  Rational rate;
  Rational step;
};

/// Best joint move by exact LP over the germ choices at every vertex, or
/// nullopt when no choice lowers all of A_max at once (or the choice space
/// is too large).
std::optional<JointMove> joint_descent(const PLMap& f);
PLMap apply_joint_move(const PLMap& f, const JointMove& m);

struct OptimizeOptions {
  int max_moves = 10000;
  /// Try a joint move before each Next_v; pure Next_v iteration can stall
  /// in infinitely many shrinking steps.
  bool joint = true;
};

struct OptimizeResult {
  PLMap map;
  int moves = 0;
  int joint_moves = 0;
  Rational lambda;  // candidate value certifying optimality
};

/// Applies Next_v at the smallest offending vertex until S_f equals the
/// candidate value. Throws BudgetExhausted with the remaining gap.
OptimizeResult optimize_pl_map(const MarkedMetricGraph& a, const MarkedMetricGraph& b,
                               const OptimizeOptions& options);
OptimizeResult optimize_pl_map(const MarkedMetricGraph& a, const MarkedMetricGraph& b,
                               int max_moves = 10000);

}  // namespace cvn
