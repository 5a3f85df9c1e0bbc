#include "cvn/stretch.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <set>
#include <tuple>

namespace cvn {

std::string shape_name(LoopShape s) {
  switch (s) {
    case LoopShape::circle:
      return "O";
    case LoopShape::figure_eight:
      return "EIGHT";
    case LoopShape::dumbbell:
      return "DUMBBELL";
  }
  return "?";
}

EdgePath canonical_rotation(const EdgePath& loop) {
  if (loop.empty()) return loop;
  EdgePath best = loop;
  for (const EdgePath& p : {loop, reversed_path(loop)}) {
    EdgePath r = p;
    for (std::size_t k = 0; k < p.size(); ++k) {
      std::rotate(r.begin(), r.begin() + 1, r.end());
      if (r < best) best = r;
    }
  }
  return best;
}

namespace {

EdgePath rotate_to(const MarkedMetricGraph& g, const EdgePath& cycle, Vertex v) {
  for (std::size_t k = 0; k < cycle.size(); ++k)
    if (g.origin(cycle[k]) == v) {
      EdgePath r(cycle.begin() + static_cast<std::ptrdiff_t>(k), cycle.end());
      r.insert(r.end(), cycle.begin(), cycle.begin() + static_cast<std::ptrdiff_t>(k));
      return r;
    }
  throw InvariantViolation("vertex is not on the cycle");
}

std::vector<Vertex> vertices_of(const MarkedMetricGraph& g, const EdgePath& cycle) {
  std::vector<Vertex> vs;
  for (OrientedEdge oe : cycle) vs.push_back(g.origin(oe));
  std::sort(vs.begin(), vs.end());
  return vs;
}

}  // namespace

std::vector<EdgePath> simple_cycles(const MarkedMetricGraph& g) {
  std::set<EdgePath> found;
  const int V = g.vertex_count();
  std::vector<char> on_path(static_cast<std::size_t>(V), 0);
  std::vector<char> used(static_cast<std::size_t>(g.edge_count()), 0);
  EdgePath path;
  std::function<void(Vertex, Vertex)> dfs = [&](Vertex s, Vertex u) {
    for (OrientedEdge oe : g.star(u)) {
      EdgeId e = edge_of(oe);
      if (used[static_cast<std::size_t>(e)]) continue;
      Vertex w = g.terminus(oe);
      if (w == s) {
        path.push_back(oe);
        found.insert(canonical_rotation(path));
        path.pop_back();
      } else if (w > s && !on_path[static_cast<std::size_t>(w)]) {
        used[static_cast<std::size_t>(e)] = 1;
        on_path[static_cast<std::size_t>(w)] = 1;
        path.push_back(oe);
        dfs(s, w);
        path.pop_back();
        on_path[static_cast<std::size_t>(w)] = 0;
        used[static_cast<std::size_t>(e)] = 0;
      }
    }
  };
  for (Vertex s = 0; s < V; ++s) {
    on_path[static_cast<std::size_t>(s)] = 1;
    dfs(s, s);
    on_path[static_cast<std::size_t>(s)] = 0;
  }
  return {found.begin(), found.end()};
}

std::vector<CandidateLoop> enumerate_candidates(const MarkedMetricGraph& a) {
  const auto cycles = simple_cycles(a);
  std::vector<std::vector<Vertex>> cverts;
  std::vector<std::vector<EdgeId>> cedges;
  for (const auto& c : cycles) {
    cverts.push_back(vertices_of(a, c));
    std::vector<EdgeId> es;
    for (OrientedEdge oe : c) es.push_back(edge_of(oe));
    std::sort(es.begin(), es.end());
    cedges.push_back(es);
  }

  std::set<EdgePath> seen;
  std::vector<CandidateLoop> out;
  auto add = [&](LoopShape shape, EdgePath loop, EdgePath first, EdgePath second, EdgePath arc) {
    EdgePath key = canonical_rotation(loop);
    if (!seen.insert(key).second) return;
    out.push_back({shape, std::move(key), std::move(first), std::move(second), std::move(arc)});
  };

  for (const auto& c : cycles) add(LoopShape::circle, c, c, {}, {});

  for (std::size_t i = 0; i < cycles.size(); ++i)
    for (std::size_t j = i + 1; j < cycles.size(); ++j) {
      std::vector<Vertex> common;
      std::set_intersection(cverts[i].begin(), cverts[i].end(), cverts[j].begin(), cverts[j].end(),
                            std::back_inserter(common));
      std::vector<EdgeId> shared;
      std::set_intersection(cedges[i].begin(), cedges[i].end(), cedges[j].begin(), cedges[j].end(),
                            std::back_inserter(shared));
      if (!shared.empty()) continue;
      if (common.size() == 1) {
        EdgePath c1 = rotate_to(a, cycles[i], common[0]);
        EdgePath c2 = rotate_to(a, cycles[j], common[0]);
        for (const EdgePath& second : {c2, reversed_path(c2)}) {
          EdgePath loop = c1;
          loop.insert(loop.end(), second.begin(), second.end());
          add(LoopShape::figure_eight, loop, c1, second, {});
        }
        continue;
      }
      if (!common.empty()) continue;

      // Dumbbells: arcs from cycle i to cycle j avoiding both elsewhere.
      std::vector<char> blocked(static_cast<std::size_t>(a.vertex_count()), 0);
      std::vector<char> goal(static_cast<std::size_t>(a.vertex_count()), 0);
      for (Vertex v : cverts[i]) blocked[static_cast<std::size_t>(v)] = 1;
      for (Vertex v : cverts[j]) goal[static_cast<std::size_t>(v)] = 1;
      EdgePath arc;
      std::function<void(Vertex)> walk = [&](Vertex u) {
        for (OrientedEdge oe : a.star(u)) {
          Vertex w = a.terminus(oe);
          if (blocked[static_cast<std::size_t>(w)]) continue;
          arc.push_back(oe);
          if (goal[static_cast<std::size_t>(w)]) {
            EdgePath c1 = rotate_to(a, cycles[i], a.origin(arc.front()));
            EdgePath c2 = rotate_to(a, cycles[j], w);
            for (const EdgePath& second : {c2, reversed_path(c2)}) {
              EdgePath loop = c1;
              loop.insert(loop.end(), arc.begin(), arc.end());
              loop.insert(loop.end(), second.begin(), second.end());
              EdgePath back = reversed_path(arc);
              loop.insert(loop.end(), back.begin(), back.end());
              add(LoopShape::dumbbell, loop, c1, second, arc);
            }
          } else {
            blocked[static_cast<std::size_t>(w)] = 1;
            walk(w);
            blocked[static_cast<std::size_t>(w)] = 0;
          }
          arc.pop_back();
        }
      };
      for (Vertex u : cverts[i]) walk(u);
    }

  std::sort(out.begin(), out.end(), [](const CandidateLoop& x, const CandidateLoop& y) {
    return std::tie(x.shape, x.loop) < std::tie(y.shape, y.loop);
  });
  return out;
}

namespace {

Rational candidate_ratio(const MarkedMetricGraph& a, const CandidateLoop& c,
                         const MarkedMetricGraph& b) {
  return translation_length(b, word_of_loop(a, c.loop)) / path_length(a, c.loop);
}

}  // namespace

std::vector<Rational> candidate_ratios_serial(const MarkedMetricGraph& a,
                                              const std::vector<CandidateLoop>& candidates,
                                              const MarkedMetricGraph& b) {
  if (a.rank() != b.rank()) throw RankMismatch("graphs have different ranks");
  std::vector<Rational> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back(candidate_ratio(a, c, b));
  return out;
}

std::vector<Rational> candidate_ratios(const MarkedMetricGraph& a,
                                       const std::vector<CandidateLoop>& candidates,
                                       const MarkedMetricGraph& b) {
  if (a.rank() != b.rank()) throw RankMismatch("graphs have different ranks");
  const auto n = static_cast<std::ptrdiff_t>(candidates.size());
  std::vector<Rational> out(candidates.size());
  bool failed = false;
#pragma omp parallel for schedule(dynamic) if (n > 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] =
          candidate_ratio(a, candidates[static_cast<std::size_t>(i)], b);
    } catch (...) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) return candidate_ratios_serial(a, candidates, b);  // rethrows on this thread
  return out;
}

StretchFactor lambda_r(const MarkedMetricGraph& a, const std::vector<CandidateLoop>& candidates,
                       const MarkedMetricGraph& b) {
  auto ratios = candidate_ratios(a, candidates, b);
  if (ratios.empty()) throw InvalidInput("graph has no candidate loops");
  StretchFactor r;
  r.value = *std::max_element(ratios.begin(), ratios.end());
  for (std::size_t i = 0; i < ratios.size(); ++i)
    if (ratios[i] == r.value) r.attained.push_back(i);
  r.witness = candidates[r.attained.front()];
  return r;
}

StretchFactor lambda_r(const MarkedMetricGraph& a, const MarkedMetricGraph& b) {
  if (a.rank() != b.rank()) throw RankMismatch("graphs have different ranks");
  return lambda_r(a, enumerate_candidates(a), b);
}

Rational lambda_r_normalized(const MarkedMetricGraph& a, const MarkedMetricGraph& b) {
  return lambda_r(a, b).value * volume(a) / volume(b);
}

StretchReport stretch_report(const MarkedMetricGraph& a, const MarkedMetricGraph& b) {
  if (a.rank() != b.rank()) throw RankMismatch("graphs have different ranks");
  auto right = lambda_r(a, b);
  auto left = lambda_r(b, a);
  StretchReport r;
  r.lambda_r = right.value;
  r.lambda_l = left.value;
  r.lambda = right.value * left.value;
  r.lambda_r_normalized = right.value * volume(a) / volume(b);
  r.lambda_l_normalized = left.value * volume(b) / volume(a);
  r.d = log_of(r.lambda);
  r.d_r = log_of(r.lambda_r_normalized);
  r.d_l = log_of(r.lambda_l_normalized);
  r.witness_r = right.witness;
  r.witness_l = left.witness;
  return r;
}

namespace {

/// Reduced closed paths at v of length at most cap, fewest edges first;
/// at most `limit` of them and at most 64 * limit extensions.
void loops_at(const MarkedMetricGraph& g, Vertex v, const Rational& cap, std::size_t limit,
              std::vector<EdgePath>& out, bool& truncated) {
  struct Partial {
    EdgePath path;
    Rational length;
  };
  std::deque<Partial> queue{{{}, Rational(0)}};
  std::size_t steps = 0;
  while (!queue.empty()) {
    Partial p = std::move(queue.front());
    queue.pop_front();
    Vertex u = p.path.empty() ? v : g.terminus(p.path.back());
    for (OrientedEdge oe : g.star(u)) {
      if (!p.path.empty() && oe == reversed(p.path.back())) continue;
      Rational next = p.length + g.length(oe);
      if (next > cap) continue;
      if (++steps > 64 * limit) {
        truncated = true;
        return;
      }
      EdgePath path = p.path;
      path.push_back(oe);
      if (g.terminus(oe) == v) {
        if (out.size() >= limit) {
          truncated = true;
          return;
        }
        out.push_back(path);
      }
      queue.push_back({std::move(path), std::move(next)});
    }
  }
}

}  // namespace

CancellationBound bounded_cancellation_bound(const PLMap& f, const CancellationOptions& options) {
  const auto& a = f.source;
  const auto& b = f.target;
  CancellationBound r;
  const Rational lambda = stretch_analysis(f).s_f;
  const Rational vol = volume(a);
  r.length_cap = options.length_cap > 0 ? options.length_cap
                                        : Rational(4 * lambda * vol * lambda_r(b, a).value);
  r.k = 0;

  struct Item {
    Vertex v;
    EdgePath loop;
    SegmentPath image;
    Rational image_length;
  };
  std::vector<Item> items;
  // n loops give n^2 pairs.
  const auto item_cap = static_cast<std::size_t>(std::sqrt(static_cast<double>(options.max_pairs))) + 1;
  for (Vertex v = 0; v < a.vertex_count() && !r.truncated; ++v) {
    std::vector<EdgePath> loops;
    loops_at(a, v, r.length_cap, item_cap - items.size(), loops, r.truncated);
    for (auto& l : loops) {
      auto img = push_path(f, l);
      auto len = path_length(img);
      items.push_back({v, std::move(l), std::move(img), len});
    }
  }

  const auto n = static_cast<std::ptrdiff_t>(items.size());
  // Pairs are visited in (alpha, beta) index order; the cap cuts that order.
  std::size_t total = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  std::size_t budget = std::min(total, options.max_pairs);
  if (budget < total) r.truncated = true;

  auto compatible = [&](const Item& x, const Item& y) {
    return x.v == y.v && x.loop.back() != reversed(y.loop.front()) &&
           y.loop.back() != reversed(x.loop.front());
  };
  auto cancellation = [&](const Item& x, const Item& y) {
    SegmentPath p = x.image;
    p.insert(p.end(), y.image.begin(), y.image.end());
    return Rational((x.image_length + y.image_length - path_length(tighten(b, p, TightenMode::path))) / 2);
  };

  struct Best {
    Rational k = 0;
    std::size_t index = static_cast<std::size_t>(-1);
    std::size_t pairs = 0;
  };
  auto better = [](const Best& x, const Best& y) {
    return x.k > y.k || (x.k == y.k && x.index < y.index);
  };
  auto scan_row = [&](std::ptrdiff_t i, Best& best) {
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      std::size_t idx = static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                        static_cast<std::size_t>(j);
      if (idx >= budget) return;
      const Item& x = items[static_cast<std::size_t>(i)];
      const Item& y = items[static_cast<std::size_t>(j)];
      if (!compatible(x, y)) continue;
      ++best.pairs;
      Best cand{cancellation(x, y), idx, 0};
      if (better(cand, best)) {
        best.k = cand.k;
        best.index = cand.index;
      }
    }
  };

  Best best;
  if (options.parallel) {
#pragma omp parallel
    {
      Best local;
#pragma omp for schedule(dynamic)
      for (std::ptrdiff_t i = 0; i < n; ++i) scan_row(i, local);
#pragma omp critical
      {
        best.pairs += local.pairs;
        if (better(local, best)) {
          best.k = local.k;
          best.index = local.index;
        }
      }
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) scan_row(i, best);
  }

  r.k = best.k;
  r.pairs = best.pairs;
  if (best.index != static_cast<std::size_t>(-1)) {
    r.alpha = items[best.index / static_cast<std::size_t>(n)].loop;
    r.beta = items[best.index % static_cast<std::size_t>(n)].loop;
  }
  r.bound = r.k + lambda * vol;
  return r;
}

}  // namespace cvn
