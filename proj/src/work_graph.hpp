#pragma once

// Mutable scratch graph shared by the operations that reshape a marked graph
// (folding, contraction, smoothing, Stallings-style basis conversion). Edge
// labels are kept consistent through vertex gauges: changing the labels at a
// vertex v by c maps label(e) to c(o(e)) label(e) c(t(e))^{-1}, which leaves
// every loop readout unchanged up to conjugation at v.

#include <functional>
#include <vector>

#include "cvn/graph.hpp"

namespace cvn::detail {

struct WorkEdge {
  Vertex from = 0;
  Vertex to = 0;
  Rational length;
  Word label;
  /// Optional image tag: an oriented edge of some target graph, followed in
  /// the forward direction. -1 when unused.
  int image = -1;
  /// Offset of the start of the edge along `image`.
  Rational offset;
  bool alive = true;
};

class WorkGraph {
 public:
  explicit WorkGraph(const MarkedMetricGraph& g);
  WorkGraph(int rank, int vertex_count, Vertex base);

  int rank() const noexcept { return rank_; }
  Vertex base() const noexcept { return base_; }
  int vertex_slots() const noexcept { return vertex_count_; }
  std::vector<WorkEdge>& edges() noexcept { return edges_; }
  const std::vector<WorkEdge>& edges() const noexcept { return edges_; }
  std::vector<EdgePath>& marking() noexcept { return marking_; }

  Vertex origin(OrientedEdge oe) const {
    const auto& d = edges_[static_cast<std::size_t>(edge_of(oe))];
    return is_forward(oe) ? d.from : d.to;
  }
  Vertex terminus(OrientedEdge oe) const { return origin(reversed(oe)); }
  Word label(OrientedEdge oe) const {
    const auto& w = edges_[static_cast<std::size_t>(edge_of(oe))].label;
    return is_forward(oe) ? w : w.inverse();
  }
  /// Image tag of the oriented edge (reverse orientation flips the tag).
  int image(OrientedEdge oe) const {
    int b = edges_[static_cast<std::size_t>(edge_of(oe))].image;
    return b < 0 ? b : (is_forward(oe) ? b : (b ^ 1));
  }

  std::vector<OrientedEdge> star(Vertex v) const;

  Vertex add_vertex() { return vertex_count_++; }
  EdgeId add_edge(WorkEdge e);

  void gauge(Vertex v, const Word& c);
  void merge_vertex(Vertex from, Vertex into);

  /// Identifies two oriented edges with a common origin (a Stallings fold).
  /// Labels are equalised by a gauge at the far end of one of them. Throws
  /// InvariantViolation when the fold would kill a loop.
  void identify(OrientedEdge keep, OrientedEdge drop);

  /// Splits edge e at distance `at` from its origin; the first piece keeps
  /// id e and the label, the returned edge is the second piece.
  EdgeId subdivide(EdgeId e, const Rational& at);

  /// Collapses a non-loop edge.
  void contract(EdgeId e);

  /// Removes a valence-2 vertex by joining its two edges, moving the
  /// basepoint first if needed. Returns false when v is not smoothable.
  bool smooth(Vertex v);

  /// Deletes valence-one vertices and their edges until none is left; they
  /// carry no loop. Returns the number of edges removed.
  int prune_hairs();

  /// Moves the basepoint across `step` (origin must be the basepoint).
  void rebase_along(OrientedEdge step);

  /// Rewrites every marking path step by step.
  void substitute(const std::function<EdgePath(OrientedEdge)>& f);

  struct Finished {
    MarkedMetricGraph graph;
    /// kept[new_id] = old id of each surviving edge.
    std::vector<EdgeId> kept;
  };
  /// Compacts ids, undoes the accumulated basepoint conjugation and
  /// tightens the marking.
  Finished finish() const;

 private:
  int rank_;
  int vertex_count_;
  Vertex base_;
  std::vector<WorkEdge> edges_;
  std::vector<EdgePath> marking_;
  /// Readout of marking()[i] is base_conj_ a_i base_conj_^{-1}.
  Word base_conj_;
};

}  // namespace cvn::detail
