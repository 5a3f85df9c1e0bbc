#include "cvn/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <optional>
#include <string>

#include "work_graph.hpp"

namespace cvn {

EdgePath reversed_path(const EdgePath& p) {
  EdgePath r;
  r.reserve(p.size());
  for (auto it = p.rbegin(); it != p.rend(); ++it) r.push_back(reversed(*it));
  return r;
}

MarkedMetricGraph::MarkedMetricGraph(int rank, int vertex_count, std::vector<EdgeData> edges,
                                     Vertex basepoint, std::vector<EdgePath> marking)
    : rank_(rank),
      vertex_count_(vertex_count),
      edges_(std::move(edges)),
      basepoint_(basepoint),
      marking_(std::move(marking)) {
  if (rank_ <= 0) throw InvalidInput("rank must be positive");
  if (vertex_count_ <= 0) throw InvalidInput("graph has no vertices");
  if (basepoint_ < 0 || basepoint_ >= vertex_count_) throw InvalidInput("basepoint out of range");
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    auto& d = edges_[e];
    d.length.canonicalize();
    if (d.from < 0 || d.from >= vertex_count_ || d.to < 0 || d.to >= vertex_count_)
      throw InvalidInput("edge " + std::to_string(e + 1) + " has an endpoint out of range");
  }
  const int oriented = 2 * edge_count();
  for (const auto& m : marking_)
    for (OrientedEdge s : m)
      if (s < 0 || s >= oriented) throw InvalidInput("marking refers to an unknown edge");
}

std::vector<OrientedEdge> MarkedMetricGraph::star(Vertex v) const {
  std::vector<OrientedEdge> out;
  for (EdgeId e = 0; e < edge_count(); ++e) {
    if (edges_[static_cast<std::size_t>(e)].from == v) out.push_back(forward_of(e));
    if (edges_[static_cast<std::size_t>(e)].to == v) out.push_back(reversed(forward_of(e)));
  }
  return out;
}

MarkedMetricGraph MarkedMetricGraph::with_lengths(std::vector<Rational> lengths) const {
  if (lengths.size() != edges_.size()) throw InvalidInput("length vector has wrong size");
  MarkedMetricGraph g = *this;
  for (std::size_t e = 0; e < lengths.size(); ++e) {
    g.edges_[e].length = std::move(lengths[e]);
    g.edges_[e].length.canonicalize();
  }
  return g;
}

MarkedMetricGraph MarkedMetricGraph::with_labels(std::vector<Word> labels) const {
  if (labels.size() != edges_.size()) throw InvalidInput("label vector has wrong size");
  MarkedMetricGraph g = *this;
  for (std::size_t e = 0; e < labels.size(); ++e) g.edges_[e].label = std::move(labels[e]);
  return g;
}

MarkedMetricGraph MarkedMetricGraph::with_marking(Vertex basepoint,
                                                  std::vector<EdgePath> marking) const {
  return MarkedMetricGraph(rank_, vertex_count_, edges_, basepoint, std::move(marking));
}

MarkedMetricGraph MarkedMetricGraph::scaled(const Rational& factor) const {
  if (factor <= 0) throw InvalidInput("scale factor must be positive");
  MarkedMetricGraph g = *this;
  for (auto& d : g.edges_) d.length *= factor;
  return g;
}

namespace {

// Checks incidence; returns the end vertex (or `start` for an empty path).
std::optional<Vertex> walk(const MarkedMetricGraph& g, const EdgePath& p, Vertex start) {
  Vertex at = start;
  for (OrientedEdge s : p) {
    if (s < 0 || s >= 2 * g.edge_count() || g.origin(s) != at) return std::nullopt;
    at = g.terminus(s);
  }
  return at;
}

void require_path(const MarkedMetricGraph& g, const EdgePath& p) {
  if (p.empty()) return;
  if (p.front() < 0 || p.front() >= 2 * g.edge_count())
    throw InvalidInput("path refers to an unknown edge");
  if (!walk(g, p, g.origin(p.front()))) throw InvalidInput("path steps are not incident");
}

void require_loop(const MarkedMetricGraph& g, const EdgePath& p) {
  require_path(g, p);
  if (!p.empty() && g.terminus(p.back()) != g.origin(p.front()))
    throw InvalidInput("path is not closed");
}

Word readout(const MarkedMetricGraph& g, const EdgePath& p) {
  std::vector<Letter> raw;
  for (OrientedEdge s : p) {
    const auto& l = g.edge(edge_of(s)).label.letters();
    if (is_forward(s))
      raw.insert(raw.end(), l.begin(), l.end());
    else
      for (auto it = l.rbegin(); it != l.rend(); ++it) raw.push_back(-*it);
  }
  return free_reduce(raw, g.rank());
}

}  // namespace

ValidationReport validate_marked_graph(const MarkedMetricGraph& g) {
  const int n = g.rank();
  const int V = g.vertex_count();
  const int E = g.edge_count();
  for (EdgeId e = 0; e < E; ++e) {
    if (g.edge(e).length <= 0) return ValidationReport::reject("edge length must be positive", e + 1);
    if (g.edge(e).label.rank() != n) return ValidationReport::reject("edge label has wrong rank", e + 1);
  }

  std::vector<char> seen(static_cast<std::size_t>(V), 0);
  std::deque<Vertex> queue{g.basepoint()};
  seen[static_cast<std::size_t>(g.basepoint())] = 1;
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (OrientedEdge s : g.star(v)) {
      Vertex w = g.terminus(s);
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        queue.push_back(w);
      }
    }
  }
  for (Vertex v = 0; v < V; ++v)
    if (!seen[static_cast<std::size_t>(v)]) return ValidationReport::reject("graph is not connected", v);
  if (E - V + 1 != n)
    return ValidationReport::reject("first Betti number " + std::to_string(E - V + 1) +
                                    " differs from rank " + std::to_string(n));
  for (Vertex v = 0; v < V; ++v)
    if (g.valence(v) < 2) return ValidationReport::reject("vertex of valence below two", v);

  if (static_cast<int>(g.marking().size()) != n)
    return ValidationReport::reject("marking must list one loop per generator");
  for (int i = 0; i < n; ++i) {
    const EdgePath& m = g.marking()[static_cast<std::size_t>(i)];
    auto end = walk(g, m, g.basepoint());
    if (!end || *end != g.basepoint())
      return ValidationReport::reject("marking path is not a loop at the basepoint", i + 1);
    if (readout(g, m) != Word::generator(i + 1, n))
      return ValidationReport::reject("marking path " + std::to_string(i + 1) +
                                          " does not read back its generator",
                                      i + 1);
  }
  return ValidationReport::accept();
}

void require_valid(const MarkedMetricGraph& g) {
  auto r = validate_marked_graph(g);
  if (!r) {
    std::string msg = r.message;
    if (r.offending >= 0) msg += " (id " + std::to_string(r.offending) + ")";
    throw InvalidInput(msg);
  }
}

EdgePath tighten(const MarkedMetricGraph& g, const EdgePath& p, TightenMode mode) {
  if (mode == TightenMode::loop)
    require_loop(g, p);
  else
    require_path(g, p);
  EdgePath out;
  out.reserve(p.size());
  for (OrientedEdge s : p) {
    if (!out.empty() && out.back() == reversed(s))
      out.pop_back();
    else
      out.push_back(s);
  }
  if (mode == TightenMode::loop) {
    std::size_t i = 0;
    std::size_t j = out.size();
    while (j - i >= 2 && out[i] == reversed(out[j - 1])) {
      ++i;
      --j;
    }
    out = EdgePath(out.begin() + static_cast<std::ptrdiff_t>(i),
                   out.begin() + static_cast<std::ptrdiff_t>(j));
  }
  return out;
}

bool is_cyclically_reduced_loop(const MarkedMetricGraph& g, const EdgePath& p) {
  if (p.empty()) return false;
  if (!walk(g, p, g.origin(p.front())) || g.terminus(p.back()) != g.origin(p.front())) return false;
  for (std::size_t k = 0; k + 1 < p.size(); ++k)
    if (p[k + 1] == reversed(p[k])) return false;
  return p.size() == 1 || p.front() != reversed(p.back());
}

EdgePath loop_of_word(const MarkedMetricGraph& g, const Word& w) {
  if (w.rank() != g.rank()) throw RankMismatch("word rank differs from graph rank");
  EdgePath p;
  for (Letter x : w.letters()) {
    const EdgePath& m = g.marking()[static_cast<std::size_t>(std::abs(x) - 1)];
    if (x > 0)
      p.insert(p.end(), m.begin(), m.end());
    else
      for (auto it = m.rbegin(); it != m.rend(); ++it) p.push_back(reversed(*it));
  }
  return tighten(g, p, TightenMode::loop);
}

Rational path_length(const MarkedMetricGraph& g, const EdgePath& p) {
  Rational s = 0;
  for (OrientedEdge e : p) s += g.length(e);
  return s;
}

Rational translation_length(const MarkedMetricGraph& g, const Word& w) {
  return path_length(g, loop_of_word(g, w));
}

Rational loop_length(const MarkedMetricGraph& g, const EdgePath& loop) {
  if (!is_cyclically_reduced_loop(g, loop)) throw InvalidInput("loop is not cyclically reduced");
  return path_length(g, loop);
}

Word word_of_loop(const MarkedMetricGraph& g, const EdgePath& loop) {
  require_loop(g, loop);
  return readout(g, loop);
}

Rational volume(const MarkedMetricGraph& g) {
  Rational s = 0;
  for (const auto& d : g.edges()) s += d.length;
  return s;
}

Normalized normalize_volume(const MarkedMetricGraph& g) {
  Rational scale = 1 / volume(g);
  scale.canonicalize();
  return {g.scaled(scale), scale};
}

bool same_simplex(const MarkedMetricGraph& a, const MarkedMetricGraph& b) {
  if (a.rank() != b.rank() || a.vertex_count() != b.vertex_count() ||
      a.edge_count() != b.edge_count() || a.basepoint() != b.basepoint() ||
      a.marking() != b.marking())
    return false;
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    const auto& x = a.edge(e);
    const auto& y = b.edge(e);
    if (x.from != y.from || x.to != y.to || x.label != y.label) return false;
  }
  return true;
}

MarkedMetricGraph interpolate_in_simplex(const MarkedMetricGraph& a, const MarkedMetricGraph& b,
                                         const Rational& t) {
  if (!same_simplex(a, b)) throw InvalidInput("graphs do not lie in the same simplex");
  if (t < 0 || t > 1) throw InvalidInput("interpolation parameter outside [0,1]");
  std::vector<Rational> lengths;
  for (EdgeId e = 0; e < a.edge_count(); ++e)
    lengths.push_back((1 - t) * a.edge(e).length + t * b.edge(e).length);
  return a.with_lengths(std::move(lengths));
}

std::vector<int> counting_vector(const MarkedMetricGraph& g, const EdgePath& loop) {
  std::vector<int> xi(static_cast<std::size_t>(g.edge_count()), 0);
  for (OrientedEdge s : loop) ++xi[static_cast<std::size_t>(edge_of(s))];
  return xi;
}

Rational counting_inner_product(const MarkedMetricGraph& g, const EdgePath& loop) {
  auto xi = counting_vector(g, loop);
  Rational s = 0;
  for (EdgeId e = 0; e < g.edge_count(); ++e) s += g.edge(e).length * xi[static_cast<std::size_t>(e)];
  return s;
}

MarkedMetricGraph apply_automorphism_to_marking(const MarkedMetricGraph& g,
                                                const AutomorphismPair& phi) {
  if (phi.rank != g.rank()) throw RankMismatch("automorphism rank differs from graph rank");
  if (auto r = validate_automorphism_pair(phi); !r) throw InvalidInput(r.message);
  std::vector<EdgePath> marking;
  for (const Word& img : phi.forward) {
    EdgePath p;
    for (Letter x : img.letters()) {
      const EdgePath& m = g.marking()[static_cast<std::size_t>(std::abs(x) - 1)];
      if (x > 0)
        p.insert(p.end(), m.begin(), m.end());
      else
        for (auto it = m.rbegin(); it != m.rend(); ++it) p.push_back(reversed(*it));
    }
    marking.push_back(tighten(g, p, TightenMode::path));
  }
  std::vector<Word> labels;
  for (const auto& d : g.edges()) labels.push_back(apply_endomorphism(d.label, phi.inverse));
  return g.with_marking(g.basepoint(), std::move(marking)).with_labels(std::move(labels));
}

std::vector<Word> derive_inverse_marking(const MarkedMetricGraph& g) {
  const int n = g.rank();
  const int V = g.vertex_count();
  const int E = g.edge_count();
  if (static_cast<int>(g.marking().size()) != n)
    throw InvalidInput("marking must list one loop per generator");
  for (const auto& m : g.marking()) {
    auto end = walk(g, m, g.basepoint());
    if (!end || *end != g.basepoint())
      throw InvalidInput("marking path is not a loop at the basepoint");
  }

  // Spanning tree; the remaining edges give a free basis x_1..x_n of pi_1.
  std::vector<char> in_tree(static_cast<std::size_t>(E), 0);
  std::vector<char> seen(static_cast<std::size_t>(V), 0);
  std::deque<Vertex> queue{g.basepoint()};
  seen[static_cast<std::size_t>(g.basepoint())] = 1;
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (OrientedEdge s : g.star(v)) {
      Vertex w = g.terminus(s);
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        in_tree[static_cast<std::size_t>(edge_of(s))] = 1;
        queue.push_back(w);
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw InvalidInput("graph is not connected");
  std::vector<int> x_of_edge(static_cast<std::size_t>(E), -1);
  std::vector<EdgeId> edge_of_x;
  for (EdgeId e = 0; e < E; ++e)
    if (!in_tree[static_cast<std::size_t>(e)]) {
      x_of_edge[static_cast<std::size_t>(e)] = static_cast<int>(edge_of_x.size());
      edge_of_x.push_back(e);
    }
  if (static_cast<int>(edge_of_x.size()) != n)
    throw InvalidInput("first Betti number differs from rank");

  // Bouquet of the marking loops written in x, tagged by a_i; fold it.
  detail::WorkGraph wg(n, 1, 0);
  for (int i = 0; i < n; ++i) {
    std::vector<int> xs;  // oriented x letters as 2j / 2j+1
    for (OrientedEdge s : g.marking()[static_cast<std::size_t>(i)]) {
      int j = x_of_edge[static_cast<std::size_t>(edge_of(s))];
      if (j < 0) continue;
      int x = 2 * j + (is_forward(s) ? 0 : 1);
      if (!xs.empty() && xs.back() == (x ^ 1))
        xs.pop_back();
      else
        xs.push_back(x);
    }
    if (xs.empty()) throw InvalidInput("marking loop is null-homotopic");
    Vertex prev = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      Vertex next = k + 1 == xs.size() ? 0 : wg.add_vertex();
      detail::WorkEdge we{prev, next, 1, k == 0 ? Word::generator(i + 1, n) : Word(n), xs[k], 0,
                          true};
      wg.add_edge(std::move(we));
      prev = next;
    }
  }

  for (bool changed = true; changed;) {
    changed = false;
    for (Vertex v = 0; v < wg.vertex_slots() && !changed; ++v) {
      auto st = wg.star(v);
      for (std::size_t a = 0; a < st.size() && !changed; ++a)
        for (std::size_t b = a + 1; b < st.size() && !changed; ++b)
          if (wg.image(st[a]) == wg.image(st[b])) {
            if (wg.terminus(st[a]) == wg.terminus(st[b]))
              throw InvalidInput("marking is not injective on pi_1");
            wg.identify(st[a], st[b]);
            changed = true;
          }
    }
  }

  auto fin = wg.finish();
  if (fin.graph.vertex_count() != 1 || fin.graph.edge_count() != n)
    throw InvalidInput("marking is not surjective on pi_1");
  std::vector<Word> inv_x(static_cast<std::size_t>(n), Word(n));
  std::vector<char> hit(static_cast<std::size_t>(n), 0);
  for (EdgeId e = 0; e < n; ++e) {
    int tag = wg.edges()[static_cast<std::size_t>(fin.kept[static_cast<std::size_t>(e)])].image;
    int j = tag >> 1;
    if (hit[static_cast<std::size_t>(j)]) throw InvalidInput("marking is not surjective on pi_1");
    hit[static_cast<std::size_t>(j)] = 1;
    const Word& l = fin.graph.edge(e).label;
    inv_x[static_cast<std::size_t>(j)] = (tag & 1) ? l.inverse() : l;
  }

  std::vector<Word> labels(static_cast<std::size_t>(E), Word(n));
  for (int j = 0; j < n; ++j)
    labels[static_cast<std::size_t>(edge_of_x[static_cast<std::size_t>(j)])] =
        inv_x[static_cast<std::size_t>(j)];
  return labels;
}

MarkedMetricGraph with_derived_labels(const MarkedMetricGraph& g) {
  return g.with_labels(derive_inverse_marking(g));
}

MarkedMetricGraph canonicalize(const MarkedMetricGraph& g) {
  detail::WorkGraph wg(g);
  for (bool changed = true; changed;) {
    changed = false;
    for (Vertex v = 0; v < wg.vertex_slots(); ++v)
      if (wg.smooth(v)) changed = true;
  }
  return wg.finish().graph;
}

MarkedMetricGraph make_rose(std::span<const Rational> petal_lengths) {
  const int n = static_cast<int>(petal_lengths.size());
  std::vector<EdgeData> edges;
  std::vector<EdgePath> marking;
  for (int i = 0; i < n; ++i) {
    edges.push_back({0, 0, petal_lengths[static_cast<std::size_t>(i)], Word::generator(i + 1, n)});
    marking.push_back({forward_of(i)});
  }
  return MarkedMetricGraph(n, 1, std::move(edges), 0, std::move(marking));
}

}  // namespace cvn
