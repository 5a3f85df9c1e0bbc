#pragma once

#include <span>
#include <utility>
#include <vector>

#include "cvn/errors.hpp"
#include "cvn/rational.hpp"
#include "cvn/word.hpp"

namespace cvn {

using Vertex = int;
/// Index of an unoriented edge, 0 <= e < edge_count().
using EdgeId = int;
/// 2e traverses edge e from `from` to `to`, 2e+1 traverses it backwards.
using OrientedEdge = int;

constexpr OrientedEdge forward_of(EdgeId e) noexcept { return 2 * e; }
constexpr OrientedEdge reversed(OrientedEdge oe) noexcept { return oe ^ 1; }
constexpr EdgeId edge_of(OrientedEdge oe) noexcept { return oe >> 1; }
constexpr bool is_forward(OrientedEdge oe) noexcept { return (oe & 1) == 0; }

/// Sequence of oriented edges, consecutive steps incident.
using EdgePath = std::vector<OrientedEdge>;

EdgePath reversed_path(const EdgePath& p);

struct EdgeData {
  Vertex from = 0;
  Vertex to = 0;
  Rational length;
  /// Readout of the homotopy inverse of the marking along the edge.
  Word label;

  friend bool operator==(const EdgeData& x, const EdgeData& y) {
    return x.from == y.from && x.to == y.to && x.length == y.length && x.label == y.label;
  }
};

/// A point of unprojectivised Outer Space: a finite metric graph with a
/// marking stored in both directions. `marking()[i]` is a loop at the
/// basepoint realising a_{i+1}; edge labels read back through the inverse.
///
/// The constructor only checks that ids are in range; use
/// validate_marked_graph for the full set of invariants.
class MarkedMetricGraph {
 public:
  MarkedMetricGraph() = default;
  MarkedMetricGraph(int rank, int vertex_count, std::vector<EdgeData> edges, Vertex basepoint,
                    std::vector<EdgePath> marking);

  int rank() const noexcept { return rank_; }
  int vertex_count() const noexcept { return vertex_count_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  Vertex basepoint() const noexcept { return basepoint_; }

  const std::vector<EdgeData>& edges() const noexcept { return edges_; }
  const EdgeData& edge(EdgeId e) const { return edges_[static_cast<std::size_t>(e)]; }
  const std::vector<EdgePath>& marking() const noexcept { return marking_; }

  Vertex origin(OrientedEdge oe) const {
    const auto& d = edge(edge_of(oe));
    return is_forward(oe) ? d.from : d.to;
  }
  Vertex terminus(OrientedEdge oe) const { return origin(reversed(oe)); }
  const Rational& length(OrientedEdge oe) const { return edge(edge_of(oe)).length; }
  Word label(OrientedEdge oe) const {
    const auto& w = edge(edge_of(oe)).label;
    return is_forward(oe) ? w : w.inverse();
  }

  /// Oriented edges leaving v; a loop edge at v contributes both orientations.
  std::vector<OrientedEdge> star(Vertex v) const;
  int valence(Vertex v) const { return static_cast<int>(star(v).size()); }

  MarkedMetricGraph with_lengths(std::vector<Rational> lengths) const;
  MarkedMetricGraph with_labels(std::vector<Word> labels) const;
  MarkedMetricGraph with_marking(Vertex basepoint, std::vector<EdgePath> marking) const;
  MarkedMetricGraph scaled(const Rational& factor) const;

  friend bool operator==(const MarkedMetricGraph&, const MarkedMetricGraph&) = default;

 private:
  int rank_ = 0;
  int vertex_count_ = 0;
  std::vector<EdgeData> edges_;
  Vertex basepoint_ = 0;
  std::vector<EdgePath> marking_;
};

ValidationReport validate_marked_graph(const MarkedMetricGraph& g);

/// Throws InvalidInput carrying the report message when validation fails.
void require_valid(const MarkedMetricGraph& g);

enum class TightenMode { path, loop };

/// Removes backtracking (mode=path) and, for mode=loop, also cancels across
/// the wrap so the result is cyclically reduced. Throws InvalidInput when
/// steps are not incident or a loop is not closed.
EdgePath tighten(const MarkedMetricGraph& g, const EdgePath& p, TightenMode mode);

bool is_cyclically_reduced_loop(const MarkedMetricGraph& g, const EdgePath& p);

/// Cyclically tightened image of w under the forward marking.
EdgePath loop_of_word(const MarkedMetricGraph& g, const Word& w);

Rational translation_length(const MarkedMetricGraph& g, const Word& w);

Rational path_length(const MarkedMetricGraph& g, const EdgePath& p);

/// Length of a cyclically reduced loop; throws InvalidInput otherwise.
Rational loop_length(const MarkedMetricGraph& g, const EdgePath& loop);

/// Freely reduced readout of edge labels along a loop.
Word word_of_loop(const MarkedMetricGraph& g, const EdgePath& loop);

Rational volume(const MarkedMetricGraph& g);

struct Normalized {
  MarkedMetricGraph graph;
  Rational scale;  // graph = scale * input
};
Normalized normalize_volume(const MarkedMetricGraph& g);

/// Same underlying graph, basepoint, marking and labels.
bool same_simplex(const MarkedMetricGraph& a, const MarkedMetricGraph& b);

/// (1-t)A + tB edgewise. Throws InvalidInput on a simplex mismatch.
MarkedMetricGraph interpolate_in_simplex(const MarkedMetricGraph& a, const MarkedMetricGraph& b,
                                         const Rational& t);

/// Unoriented occurrence count of every edge along the loop.
std::vector<int> counting_vector(const MarkedMetricGraph& g, const EdgePath& loop);
Rational counting_inner_product(const MarkedMetricGraph& g, const EdgePath& loop);

/// The point (G, tau_G o phi). Throws InvalidInput if phi is not a valid pair.
MarkedMetricGraph apply_automorphism_to_marking(const MarkedMetricGraph& g,
                                                const AutomorphismPair& phi);

/// Edge labels making the stored forward marking consistent. Existing labels
/// are ignored. Throws InvalidInput when the marking is not a pi_1 isomorphism.
std::vector<Word> derive_inverse_marking(const MarkedMetricGraph& g);

/// Convenience: replaces the labels with derived ones.
MarkedMetricGraph with_derived_labels(const MarkedMetricGraph& g);

/// Suppresses valence-2 vertices. Translation lengths are unchanged.
MarkedMetricGraph canonicalize(const MarkedMetricGraph& g);

/// Rank-n rose with the given petal lengths and the identity marking.
MarkedMetricGraph make_rose(std::span<const Rational> petal_lengths);

}  // namespace cvn
