#include "cvn/folding.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "work_graph.hpp"

namespace cvn {

namespace {

using detail::WorkEdge;
using detail::WorkGraph;

/// Scratch copy of a snapshot with each edge tagged by its target segment.
WorkGraph load(const MarkedMetricGraph& g, const PLMap& f) {
  WorkGraph wg(g);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& img = f.edge_image[static_cast<std::size_t>(e)];
    if (img.size() != 1 || img.front().length() != g.edge(e).length)
      throw InvariantViolation("folding map is not isometric onto a single target edge");
    auto& d = wg.edges()[static_cast<std::size_t>(e)];
    d.image = img.front().edge;
    d.offset = img.front().from;
  }
  return wg;
}

PathSample unload(const WorkGraph& wg, const MarkedMetricGraph& target, const SegmentPath& base_path) {
  auto fin = wg.finish();
  PathSample s{std::move(fin.graph), {}};
  const auto& g = s.graph;
  PLMap f{g, target, std::vector<Point>(static_cast<std::size_t>(g.vertex_count())), {}, base_path};
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const WorkEdge& d = wg.edges()[static_cast<std::size_t>(fin.kept[static_cast<std::size_t>(e)])];
    Segment seg{d.image, d.offset, d.offset + d.length};
    f.vertex_image[static_cast<std::size_t>(g.edge(e).from)] = start_point(target, seg);
    f.vertex_image[static_cast<std::size_t>(g.edge(e).to)] = end_point(target, seg);
    f.edge_image.push_back({seg});
  }
  s.map = std::move(f);
  return s;
}

/// Germs at each vertex grouped by their target direction; only groups of
/// two or more, restricted to the lowest such vertex for single_vertex.
std::vector<std::vector<OrientedEdge>> fold_groups(const WorkGraph& wg, FoldStrategy strategy) {
  std::map<std::pair<Vertex, int>, std::vector<OrientedEdge>> buckets;
  for (EdgeId e = 0; e < static_cast<EdgeId>(wg.edges().size()); ++e) {
    if (!wg.edges()[static_cast<std::size_t>(e)].alive) continue;
    for (OrientedEdge oe : {forward_of(e), reversed(forward_of(e))})
      buckets[{wg.origin(oe), wg.image(oe)}].push_back(oe);
  }
  std::vector<std::vector<OrientedEdge>> out;
  Vertex chosen = -1;
  for (auto& [key, germs] : buckets) {
    if (germs.size() < 2) continue;
    if (strategy == FoldStrategy::single_vertex) {
      if (chosen < 0) chosen = key.first;
      if (key.first != chosen) continue;
    }
    out.push_back(std::move(germs));
  }
  return out;
}

/// Active ends per edge: bit 0 forward germ, bit 1 reverse germ.
std::map<EdgeId, int> active_ends(const std::vector<std::vector<OrientedEdge>>& groups) {
  std::map<EdgeId, int> ends;
  for (const auto& g : groups)
    for (OrientedEdge oe : g) ends[edge_of(oe)] |= is_forward(oe) ? 1 : 2;
  return ends;
}

Rational next_event(const WorkGraph& wg, const std::vector<std::vector<OrientedEdge>>& groups) {
  Rational best = -1;
  for (auto [e, bits] : active_ends(groups)) {
    int r = (bits & 1) + ((bits >> 1) & 1);
    Rational t = wg.edges()[static_cast<std::size_t>(e)].length / r;
    if (best < 0 || t < best) best = t;
  }
  return best;
}

/// Identifies the initial segments of length tau of every germ in each group.
void fold_for(WorkGraph& wg, const MarkedMetricGraph& target,
              const std::vector<std::vector<OrientedEdge>>& groups, const Rational& tau) {
  std::map<OrientedEdge, OrientedEdge> piece;
  for (auto [e, bits] : active_ends(groups)) {
    const Rational len = wg.edges()[static_cast<std::size_t>(e)].length;
    const OrientedEdge fwd = forward_of(e);
    if (bits == 3) {
      if (2 * tau > len) throw InvariantViolation("fold step beyond the next event");
      EdgeId mid = wg.subdivide(e, tau);
      EdgeId last = mid;
      if (2 * tau < len) last = wg.subdivide(mid, len - 2 * tau);
      piece[fwd] = fwd;
      piece[reversed(fwd)] = reversed(forward_of(last));
    } else if (bits == 1) {
      if (tau > len) throw InvariantViolation("fold step beyond the next event");
      if (tau < len) wg.subdivide(e, tau);
      piece[fwd] = fwd;
    } else {
      if (tau > len) throw InvariantViolation("fold step beyond the next event");
      EdgeId last = tau < len ? wg.subdivide(e, len - tau) : e;
      piece[reversed(fwd)] = reversed(forward_of(last));
    }
  }
  const auto& b = wg.edges();
  auto start_offset = [&](OrientedEdge oe) {
    const auto& d = b[static_cast<std::size_t>(edge_of(oe))];
    return is_forward(oe) ? d.offset : Rational(target.length(d.image) - d.offset - d.length);
  };
  for (const auto& g : groups) {
    const OrientedEdge keep = piece.at(g.front());
    for (std::size_t k = 1; k < g.size(); ++k) {
      const OrientedEdge drop = piece.at(g[k]);
      if (wg.image(keep) != wg.image(drop) || start_offset(keep) != start_offset(drop))
        throw InvariantViolation("folded germs have different images");
      wg.identify(keep, drop);
    }
  }
}

}  // namespace

FoldingSetup prepare_folding_setup(const MarkedMetricGraph& a, const MarkedMetricGraph& b,
                                   const OptimizeOptions& options) {
  auto opt = optimize_pl_map(a, b, options);
  const PLMap& f = opt.map;
  auto nb = normalize_volume(b);
  const Rational& s = nb.scale;
  auto scale = [&](Segment seg) {
    seg.from *= s;
    seg.to *= s;
    return seg;
  };

  WorkGraph wg(a);
  std::vector<EdgeId> constant;
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    const auto& img = f.edge_image[static_cast<std::size_t>(e)];
    if (img.empty()) {
      constant.push_back(e);
      continue;
    }
    wg.edges()[static_cast<std::size_t>(e)].length = path_length(img) * s;
    EdgeId cur = e;
    for (std::size_t k = 0; k < img.size(); ++k) {
      Segment seg = scale(img[k]);
      EdgeId next = k + 1 < img.size() ? wg.subdivide(cur, seg.length()) : cur;
      auto& d = wg.edges()[static_cast<std::size_t>(cur)];
      d.image = seg.edge;
      d.offset = seg.from;
      cur = next;
    }
  }
  for (EdgeId e : constant) wg.contract(e);

  SegmentPath base_path;
  for (const auto& seg : f.base_path) base_path.push_back(scale(seg));
  auto sample = unload(wg, nb.graph, base_path);

  auto sf = lambda_r(a, b);
  FoldingSetup setup;
  setup.source = std::move(sample.graph);
  setup.target = nb.graph;
  setup.map = std::move(sample.map);
  setup.lambda = opt.lambda;
  setup.moves = opt.moves;
  setup.witness_word = word_of_loop(a, sf.witness.loop);
  setup.witness = loop_of_word(setup.source, setup.witness_word);
  return setup;
}

std::vector<FoldTurn> folding_turns(const PLMap& f, FoldStrategy strategy) {
  const auto& g = f.source;
  std::vector<FoldTurn> out;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    std::map<OrientedEdge, std::vector<OrientedEdge>> buckets;
    for (OrientedEdge oe : g.star(v)) {
      auto img = f.image(oe);
      if (!img.empty()) buckets[img.front().edge].push_back(oe);
    }
    bool any = false;
    for (const auto& [dir, germs] : buckets)
      for (std::size_t i = 0; i < germs.size(); ++i)
        for (std::size_t j = i + 1; j < germs.size(); ++j) {
          out.push_back({v, germs[i], germs[j]});
          any = true;
        }
    if (any && strategy == FoldStrategy::single_vertex) break;
  }
  return out;
}

int multiplicity(const PLMap& f, const EdgePath& loop, FoldStrategy strategy) {
  if (!is_cyclically_reduced_loop(f.source, loop)) throw InvalidInput("not a cyclically reduced loop");
  std::map<std::pair<OrientedEdge, OrientedEdge>, int> turns;
  for (const auto& t : folding_turns(f, strategy)) {
    turns[{t.first, t.second}] = 1;
    turns[{t.second, t.first}] = 1;
  }
  int mu = 0;
  for (std::size_t k = 0; k < loop.size(); ++k) {
    OrientedEdge in = reversed(loop[k]);
    OrientedEdge out = loop[(k + 1) % loop.size()];
    if (turns.count({in, out})) ++mu;
  }
  return mu;
}

int multiplicity(const PLMap& f, const Word& w, FoldStrategy strategy) {
  return multiplicity(f, loop_of_word(f.source, w), strategy);
}

FoldingPath fast_fold(const FoldingSetup& setup, FoldStrategy strategy, int max_events) {
  FoldingPath path{setup, strategy, {Rational(0)}, {setup.source}, {setup.map}};
  while (true) {
    WorkGraph wg = load(path.snapshots.back(), path.maps.back());
    auto groups = fold_groups(wg, strategy);
    if (groups.empty()) break;
    if (static_cast<int>(path.event_count()) >= max_events)
      throw BudgetExhausted("folding did not finish after " + std::to_string(max_events) + " events");
    Rational t = next_event(wg, groups);
    fold_for(wg, setup.target, groups, t);
    wg.prune_hairs();
    auto s = unload(wg, setup.target, setup.map.base_path);
    path.times.push_back(path.times.back() + t);
    path.snapshots.push_back(std::move(s.graph));
    path.maps.push_back(std::move(s.map));
  }
  return path;
}

PathSample sample_path(const FoldingPath& path, const Rational& t) {
  if (t < 0 || t > path.end_time())
    throw InvalidInput("time " + to_string(t) + " outside [0, " + to_string(path.end_time()) + "]");
  auto it = std::upper_bound(path.times.begin(), path.times.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - path.times.begin()) - 1;
  if (path.times[i] == t) return {path.snapshots[i], path.maps[i], path.strategy};
  WorkGraph wg = load(path.snapshots[i], path.maps[i]);
  auto groups = fold_groups(wg, path.strategy);
  fold_for(wg, path.setup.target, groups, t - path.times[i]);
  wg.prune_hairs();
  auto s = unload(wg, path.setup.target, path.setup.map.base_path);
  s.strategy = path.strategy;
  return s;
}

Speeds speeds(const PathSample& sample) {
  const FoldStrategy strategy = sample.strategy;
  const auto& g = sample.graph;
  const auto& f = sample.map;
  if (folding_turns(f, strategy).empty()) throw InvalidInput("no folding turn: the path has ended");
  Speeds s;
  bool have = false;
  Rational best_q;
  // Dumbbells are needed when a folding turn sits on a separating edge.
  for (const auto& c : enumerate_candidates(g)) {
    int mu = multiplicity(f, c.loop, strategy);
    if (mu == 0) continue;
    Rational q = loop_length(g, c.loop) / mu;
    if (!have || q < best_q) {
      best_q = q;
      s.local_loop = c.loop;
      have = true;
    }
  }
  if (!have) throw InvariantViolation("folding turn crossed by no candidate loop");
  s.local = 2 / best_q;

  const auto& target = f.target;
  auto cands = enumerate_candidates(target);
  auto toward = lambda_r(target, cands, g);
  bool first = true;
  for (std::size_t idx : toward.attained) {
    Word w = word_of_loop(target, cands[idx].loop);
    EdgePath loop = loop_of_word(g, w);
    Rational v = Rational(2 * multiplicity(f, loop, strategy)) / loop_length(g, loop);
    if (first || v < s.toward) {
      s.toward = v;
      s.toward_word = w;
      first = false;
    }
  }
  s.ratio = s.toward / s.local;
  return s;
}

Speeds speeds(const FoldingPath& path, const Rational& t) {
  if (t >= path.end_time()) throw InvalidInput("no folding turn: the path has ended");
  return speeds(sample_path(path, t));
}

Systole systole_and_thin_test(const MarkedMetricGraph& g, const Rational& epsilon) {
  Systole s;
  const Rational vol = volume(g);
  bool first = true;
  for (const auto& c : simple_cycles(g)) {
    Rational v = loop_length(g, c) / vol;
    if (first || v < s.value) {
      s.value = v;
      s.loop = c;
      first = false;
    }
  }
  s.thin = s.value < epsilon;
  return s;
}

TraceRow trace_row(const FoldingPath& path, const Rational& t) {
  auto sample = sample_path(path, t);
  TraceRow r;
  r.time = t;
  r.volume = volume(sample.graph);
  r.systole = systole_and_thin_test(sample.graph, 0).value;
  if (t < path.end_time()) {
    auto sp = speeds(sample);
    r.local_speed = sp.local;
    r.toward_speed = sp.toward;
  } else {
    r.local_speed = 0;
    r.toward_speed = 0;
  }
  r.lambda_to_target = lambda_r_normalized(sample.graph, path.setup.target);
  r.d_r_to_target = log_of(r.lambda_to_target);
  return r;
}

}  // namespace cvn
