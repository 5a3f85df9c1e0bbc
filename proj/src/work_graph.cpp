#include "work_graph.hpp"

#include <string>

namespace cvn::detail {

WorkGraph::WorkGraph(const MarkedMetricGraph& g)
    : rank_(g.rank()),
      vertex_count_(g.vertex_count()),
      base_(g.basepoint()),
      marking_(g.marking()),
      base_conj_(g.rank()) {
  edges_.reserve(g.edges().size());
  for (const auto& d : g.edges()) edges_.push_back({d.from, d.to, d.length, d.label, -1, 0, true});
}

WorkGraph::WorkGraph(int rank, int vertex_count, Vertex base)
    : rank_(rank), vertex_count_(vertex_count), base_(base), base_conj_(rank) {}

std::vector<OrientedEdge> WorkGraph::star(Vertex v) const {
  std::vector<OrientedEdge> out;
  for (EdgeId e = 0; e < static_cast<EdgeId>(edges_.size()); ++e) {
    const auto& d = edges_[static_cast<std::size_t>(e)];
    if (!d.alive) continue;
    if (d.from == v) out.push_back(forward_of(e));
    if (d.to == v) out.push_back(reversed(forward_of(e)));
  }
  return out;
}

EdgeId WorkGraph::add_edge(WorkEdge e) {
  if (e.label.rank() != rank_) e.label = Word(rank_);
  edges_.push_back(std::move(e));
  return static_cast<EdgeId>(edges_.size()) - 1;
}

void WorkGraph::gauge(Vertex v, const Word& c) {
  if (c.empty()) return;
  const Word ci = c.inverse();
  for (auto& d : edges_) {
    if (!d.alive) continue;
    if (d.from == v) d.label = c * d.label;
    if (d.to == v) d.label = d.label * ci;
  }
  if (v == base_) base_conj_ = c * base_conj_;
}

void WorkGraph::merge_vertex(Vertex from, Vertex into) {
  if (from == into) return;
  for (auto& d : edges_) {
    if (d.from == from) d.from = into;
    if (d.to == from) d.to = into;
  }
  if (base_ == from) base_ = into;
}

void WorkGraph::identify(OrientedEdge keep, OrientedEdge drop) {
  if (keep == drop) return;
  if (edge_of(keep) == edge_of(drop))
    throw InvariantViolation("fold of an edge with its own reverse");
  const Vertex o = origin(keep);
  if (origin(drop) != o) throw InvariantViolation("fold of edges with different origins");

  Vertex tk = terminus(keep);
  Vertex td = terminus(drop);
  if (tk == td) throw InvariantViolation("fold of parallel edges would lose rank");
  if (td == o) {
    // drop is a loop at o and keep is not: gauge the far end of keep instead.
    gauge(tk, label(drop).inverse() * label(keep));
    merge_vertex(tk, td);
  } else {
    gauge(td, label(keep).inverse() * label(drop));
    merge_vertex(td, tk);
  }
  if (label(keep) != label(drop)) throw InvariantViolation("gauge failed to equalise labels");

  edges_[static_cast<std::size_t>(edge_of(drop))].alive = false;
  substitute([&](OrientedEdge s) -> EdgePath {
    if (s == drop) return {keep};
    if (s == reversed(drop)) return {reversed(keep)};
    return {s};
  });
}

EdgeId WorkGraph::subdivide(EdgeId e, const Rational& at) {
  auto& d = edges_[static_cast<std::size_t>(e)];
  if (!(at > 0 && at < d.length)) throw InvariantViolation("subdivision point outside edge");
  const Vertex mid = add_vertex();
  WorkEdge second{mid, d.to, d.length - at, Word(rank_), d.image, d.offset + at, true};
  d.to = mid;
  d.length = at;
  const EdgeId e2 = add_edge(std::move(second));
  const OrientedEdge f = forward_of(e);
  const OrientedEdge f2 = forward_of(e2);
  substitute([&](OrientedEdge s) -> EdgePath {
    if (s == f) return {f, f2};
    if (s == reversed(f)) return {reversed(f2), reversed(f)};
    return {s};
  });
  return e2;
}

void WorkGraph::contract(EdgeId e) {
  auto& d = edges_[static_cast<std::size_t>(e)];
  const Vertex u = d.from;
  const Vertex v = d.to;
  if (u == v) throw InvariantViolation("cannot contract a loop edge");
  if (v != base_) {
    gauge(v, edges_[static_cast<std::size_t>(e)].label);
    edges_[static_cast<std::size_t>(e)].alive = false;
    merge_vertex(v, u);
  } else {
    gauge(u, edges_[static_cast<std::size_t>(e)].label.inverse());
    edges_[static_cast<std::size_t>(e)].alive = false;
    merge_vertex(u, v);
  }
  const OrientedEdge f = forward_of(e);
  substitute([&](OrientedEdge s) -> EdgePath {
    if (edge_of(s) == edge_of(f)) return {};
    return {s};
  });
}

void WorkGraph::rebase_along(OrientedEdge step) {
  if (origin(step) != base_) throw InvariantViolation("rebase step does not leave the basepoint");
  // New loops at t(step) are step^{-1} m step; their readout picks up the
  // step label as an extra conjugator.
  const Word l = label(step);
  for (auto& m : marking_) {
    EdgePath p;
    p.reserve(m.size() + 2);
    p.push_back(reversed(step));
    p.insert(p.end(), m.begin(), m.end());
    p.push_back(step);
    m = std::move(p);
  }
  base_conj_ = l.inverse() * base_conj_;
  base_ = terminus(step);
}

bool WorkGraph::smooth(Vertex v) {
  auto st = star(v);
  if (st.size() != 2) return false;
  if (edge_of(st[0]) == edge_of(st[1])) return false;  // a lone circle
  const OrientedEdge in = reversed(st[0]);            // u -> v
  const OrientedEdge out = st[1];                     // v -> w
  if (v == base_) rebase_along(st[0]);                // base moves to u
  const Vertex u = origin(in);
  const Vertex w = terminus(out);
  WorkEdge joined{u, w, edges_[static_cast<std::size_t>(edge_of(in))].length +
                            edges_[static_cast<std::size_t>(edge_of(out))].length,
                  label(in) * label(out), -1, 0, true};
  const EdgeId keep = edge_of(in);
  const bool in_forward = is_forward(in);
  const bool out_forward = is_forward(out);
  edges_[static_cast<std::size_t>(edge_of(out))].alive = false;
  edges_[static_cast<std::size_t>(keep)] = std::move(joined);
  const OrientedEdge in_old = in_forward ? forward_of(keep) : reversed(forward_of(keep));
  const OrientedEdge out_old =
      out_forward ? forward_of(edge_of(out)) : reversed(forward_of(edge_of(out)));
  substitute([&](OrientedEdge s) -> EdgePath {
    if (s == in_old) return {forward_of(keep)};
    if (s == reversed(in_old)) return {reversed(forward_of(keep))};
    if (s == out_old || s == reversed(out_old)) return {};
    return {s};
  });
  return true;
}

void WorkGraph::substitute(const std::function<EdgePath(OrientedEdge)>& f) {
  for (auto& m : marking_) {
    EdgePath out;
    out.reserve(m.size());
    for (OrientedEdge s : m) {
      auto r = f(s);
      out.insert(out.end(), r.begin(), r.end());
    }
    m = std::move(out);
  }
}

int WorkGraph::prune_hairs() {
  int removed = 0;
  for (bool again = true; again;) {
    again = false;
    for (Vertex v = 0; v < vertex_count_; ++v) {
      auto st = star(v);
      if (st.size() != 1) continue;
      const OrientedEdge out = st.front();
      if (v == base_) rebase_along(out);
      // Marking paths can only enter the hair to turn back.
      for (auto& m : marking_) {
        EdgePath p;
        for (OrientedEdge s : m) {
          if (!p.empty() && p.back() == reversed(s)) {
            p.pop_back();
          } else {
            p.push_back(s);
          }
        }
        m = std::move(p);
      }
      substitute([&](OrientedEdge s) -> EdgePath {
        if (edge_of(s) == edge_of(out)) throw InvariantViolation("marking runs along a hair");
        return {s};
      });
      edges_[static_cast<std::size_t>(edge_of(out))].alive = false;
      ++removed;
      again = true;
    }
  }
  return removed;
}

WorkGraph::Finished WorkGraph::finish() const {
  std::vector<int> vmap(static_cast<std::size_t>(vertex_count_), -1);
  std::vector<int> emap(edges_.size(), -1);
  std::vector<EdgeId> kept;
  int nv = 0;
  auto touch = [&](Vertex v) {
    if (vmap[static_cast<std::size_t>(v)] < 0) vmap[static_cast<std::size_t>(v)] = nv++;
  };
  touch(base_);
  std::vector<EdgeData> out;
  const Word ci = base_conj_.inverse();
  for (EdgeId e = 0; e < static_cast<EdgeId>(edges_.size()); ++e) {
    const auto& d = edges_[static_cast<std::size_t>(e)];
    if (!d.alive) continue;
    touch(d.from);
    touch(d.to);
    emap[static_cast<std::size_t>(e)] = static_cast<int>(out.size());
    kept.push_back(e);
    out.push_back({vmap[static_cast<std::size_t>(d.from)], vmap[static_cast<std::size_t>(d.to)],
                   d.length, ci * d.label * base_conj_});
  }
  std::vector<EdgePath> marking;
  for (const auto& m : marking_) {
    EdgePath p;
    for (OrientedEdge s : m) {
      int ne = emap[static_cast<std::size_t>(edge_of(s))];
      if (ne < 0) throw InvariantViolation("marking crosses a removed edge");
      p.push_back(is_forward(s) ? forward_of(ne) : reversed(forward_of(ne)));
    }
    marking.push_back(std::move(p));
  }
  MarkedMetricGraph raw(rank_, nv, std::move(out), vmap[static_cast<std::size_t>(base_)],
                        marking);
  for (auto& m : marking) m = tighten(raw, m, TightenMode::path);
  return {raw.with_marking(raw.basepoint(), std::move(marking)), std::move(kept)};
}

}  // namespace cvn::detail
