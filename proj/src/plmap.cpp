#include "cvn/plmap.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "cvn/stretch.hpp"
#include "lp.hpp"

namespace cvn {

Point point_along(const MarkedMetricGraph& g, OrientedEdge oe, const Rational& s) {
  const Rational& len = g.length(oe);
  if (s == 0) return Point::at_vertex(g.origin(oe));
  if (s == len) return Point::at_vertex(g.terminus(oe));
  return {-1, edge_of(oe), is_forward(oe) ? s : Rational(len - s)};
}

Segment reversed(const MarkedMetricGraph& g, const Segment& s) {
  const Rational& len = g.length(s.edge);
  return {reversed(s.edge), len - s.to, len - s.from};
}

SegmentPath reversed(const MarkedMetricGraph& g, const SegmentPath& p) {
  SegmentPath r;
  r.reserve(p.size());
  for (auto it = p.rbegin(); it != p.rend(); ++it) r.push_back(reversed(g, *it));
  return r;
}

Rational path_length(const SegmentPath& p) {
  Rational s = 0;
  for (const auto& x : p) s += x.length();
  return s;
}

Point start_point(const MarkedMetricGraph& g, const Segment& s) {
  return point_along(g, s.edge, s.from);
}

Point end_point(const MarkedMetricGraph& g, const Segment& s) {
  return point_along(g, s.edge, s.to);
}

SegmentPath segments_of(const MarkedMetricGraph& g, const EdgePath& p) {
  SegmentPath out;
  out.reserve(p.size());
  for (OrientedEdge oe : p) out.push_back({oe, 0, g.length(oe)});
  return out;
}

std::optional<EdgePath> as_edge_path(const MarkedMetricGraph& g, const SegmentPath& p) {
  EdgePath out;
  for (const auto& s : p) {
    if (s.from != 0 || s.to != g.length(s.edge)) return std::nullopt;
    out.push_back(s.edge);
  }
  return out;
}

namespace {

void push_segment(SegmentPath& out, Segment s) {
  while (true) {
    if (s.length() <= 0) return;
    if (out.empty()) {
      out.push_back(std::move(s));
      return;
    }
    Segment& top = out.back();
    if (top.edge == s.edge && top.to == s.from) {
      top.to = s.to;
      return;
    }
    if (top.edge == reversed(s.edge)) {
      Rational lt = top.length();
      Rational ls = s.length();
      if (ls < lt) {
        top.to -= ls;
        return;
      }
      out.pop_back();
      if (ls == lt) return;
      s.from += lt;
      continue;
    }
    out.push_back(std::move(s));
    return;
  }
}

}  // namespace

SegmentPath tighten(const MarkedMetricGraph& g, const SegmentPath& p, TightenMode mode) {
  (void)g;
  SegmentPath out;
  out.reserve(p.size());
  for (const auto& s : p) push_segment(out, s);
  if (mode == TightenMode::loop) {
    while (out.size() >= 2) {
      Segment& first = out.front();
      Segment& last = out.back();
      if (last.edge == reversed(first.edge)) {
        Rational c = std::min(first.length(), last.length());
        last.to -= c;
        first.from += c;
        if (last.length() == 0) out.pop_back();
        if (!out.empty() && out.front().length() == 0) out.erase(out.begin());
        continue;
      }
      if (last.edge == first.edge && last.to == first.from) {
        first.from = last.from;
        out.pop_back();
        continue;
      }
      break;
    }
  }
  return out;
}

SegmentPath PLMap::image(OrientedEdge oe) const {
  const auto& img = edge_image[static_cast<std::size_t>(edge_of(oe))];
  return is_forward(oe) ? img : reversed(target, img);
}

Rational PLMap::edge_stretch(EdgeId e) const {
  return path_length(edge_image[static_cast<std::size_t>(e)]) / source.edge(e).length;
}

SegmentPath push_path(const PLMap& f, const EdgePath& p) {
  SegmentPath out;
  for (OrientedEdge oe : p)
    for (auto& s : f.image(oe)) push_segment(out, s);
  return out;
}

Rational loop_image_length(const PLMap& f, const EdgePath& loop) {
  SegmentPath p;
  for (OrientedEdge oe : loop) {
    auto img = f.image(oe);
    p.insert(p.end(), img.begin(), img.end());
  }
  return path_length(tighten(f.target, p, TightenMode::loop));
}

ValidationReport validate_pl_map(const PLMap& f) {
  const auto& a = f.source;
  const auto& b = f.target;
  if (a.rank() != b.rank()) return ValidationReport::reject("source and target ranks differ");
  if (static_cast<int>(f.vertex_image.size()) != a.vertex_count() ||
      static_cast<int>(f.edge_image.size()) != a.edge_count())
    return ValidationReport::reject("map tables do not match the source graph");
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    const auto& img = f.edge_image[static_cast<std::size_t>(e)];
    const Point& p = f.vertex_image[static_cast<std::size_t>(a.edge(e).from)];
    const Point& q = f.vertex_image[static_cast<std::size_t>(a.edge(e).to)];
    if (img.empty()) {
      if (!(p == q)) return ValidationReport::reject("constant edge joins distinct points", e + 1);
      continue;
    }
    if (!(start_point(b, img.front()) == p) || !(end_point(b, img.back()) == q))
      return ValidationReport::reject("edge image endpoints differ from vertex images", e + 1);
    for (std::size_t k = 0; k + 1 < img.size(); ++k)
      if (!(end_point(b, img[k]) == start_point(b, img[k + 1])))
        return ValidationReport::reject("edge image is not connected", e + 1);
    if (tighten(b, img, TightenMode::path) != img)
      return ValidationReport::reject("edge image is not tight", e + 1);
  }
  const Point& base_image = f.vertex_image[static_cast<std::size_t>(a.basepoint())];
  if (f.base_path.empty()) {
    if (!(base_image == Point::at_vertex(b.basepoint())))
      return ValidationReport::reject("basepoint path missing");
  } else if (!(start_point(b, f.base_path.front()) == Point::at_vertex(b.basepoint())) ||
             !(end_point(b, f.base_path.back()) == base_image)) {
    return ValidationReport::reject("basepoint path has wrong endpoints");
  }
  const SegmentPath back = reversed(b, f.base_path);
  for (int i = 0; i < a.rank(); ++i) {
    SegmentPath p = f.base_path;
    for (OrientedEdge oe : a.marking()[static_cast<std::size_t>(i)]) {
      auto img = f.image(oe);
      p.insert(p.end(), img.begin(), img.end());
    }
    p.insert(p.end(), back.begin(), back.end());
    auto edges = as_edge_path(b, tighten(b, p, TightenMode::path));
    if (!edges) return ValidationReport::reject("pushed petal is not a vertex loop", i + 1);
    if (word_of_loop(b, *edges) != Word::generator(i + 1, a.rank()))
      return ValidationReport::reject("map is not in the marking homotopy class", i + 1);
  }
  return ValidationReport::accept();
}

PLMap initial_pl_map(const MarkedMetricGraph& a, const MarkedMetricGraph& b) {
  if (a.rank() != b.rank()) throw RankMismatch("source and target ranks differ");
  PLMap f{a, b, {}, {}, {}};
  if (same_simplex(a, b)) {
    // Same marked graph up to lengths: the identity is the natural representative.
    for (Vertex v = 0; v < a.vertex_count(); ++v) f.vertex_image.push_back(Point::at_vertex(v));
    for (EdgeId e = 0; e < a.edge_count(); ++e) f.edge_image.push_back(segments_of(b, {forward_of(e)}));
    return f;
  }
  f.vertex_image.assign(static_cast<std::size_t>(a.vertex_count()), Point::at_vertex(b.basepoint()));
  for (const auto& d : a.edges()) {
    EdgePath p;
    for (Letter x : d.label.letters()) {
      const EdgePath& m = b.marking()[static_cast<std::size_t>(std::abs(x) - 1)];
      if (x > 0)
        p.insert(p.end(), m.begin(), m.end());
      else
        for (auto it = m.rbegin(); it != m.rend(); ++it) p.push_back(reversed(*it));
    }
    f.edge_image.push_back(segments_of(b, tighten(b, p, TightenMode::path)));
  }
  return f;
}

StretchAnalysis stretch_analysis(const PLMap& f) {
  const auto& a = f.source;
  StretchAnalysis r;
  r.s_f = 0;
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    r.per_edge.push_back(f.edge_stretch(e));
    if (r.per_edge.back() > r.s_f) r.s_f = r.per_edge.back();
  }
  std::vector<char> in_max(static_cast<std::size_t>(a.edge_count()), 0);
  for (EdgeId e = 0; e < a.edge_count(); ++e)
    if (r.per_edge[static_cast<std::size_t>(e)] == r.s_f) {
      r.a_max.push_back(e);
      in_max[static_cast<std::size_t>(e)] = 1;
    }
  for (Vertex v = 0; v < a.vertex_count(); ++v) {
    std::vector<OrientedEdge> germs;
    for (OrientedEdge oe : a.star(v)) {
      if (!in_max[static_cast<std::size_t>(edge_of(oe))]) continue;
      auto img = f.image(oe);
      germs.push_back(img.empty() ? -1 : img.front().edge);
    }
    if (germs.empty()) continue;
    if (std::all_of(germs.begin(), germs.end(), [&](OrientedEdge g) { return g == germs.front(); }))
      r.boundary.push_back(v);
  }
  return r;
}

Optimality is_optimal(const PLMap& f) {
  auto sa = stretch_analysis(f);
  return {sa.boundary.empty(), sa.boundary};
}

namespace {

struct MoveGeometry {
  OrientedEdge alpha = -1;
  Rational start;  // offset of f(v) along alpha
  Rational t_geom;
  Rational t_cross;
  bool has_cross = false;
};

MoveGeometry move_geometry(const PLMap& f, Vertex v) {
  const auto& a = f.source;
  const auto& b = f.target;
  auto sa = stretch_analysis(f);
  if (std::find(sa.boundary.begin(), sa.boundary.end(), v) == sa.boundary.end())
    throw InvalidInput("vertex " + std::to_string(v) + " is not in the f-boundary of A_max");
  std::vector<char> in_max(static_cast<std::size_t>(a.edge_count()), 0);
  for (EdgeId e : sa.a_max) in_max[static_cast<std::size_t>(e)] = 1;

  MoveGeometry m;
  for (OrientedEdge oe : a.star(v))
    if (in_max[static_cast<std::size_t>(edge_of(oe))]) {
      m.alpha = f.image(oe).front().edge;
      break;
    }
  const Point& fv = f.vertex_image[static_cast<std::size_t>(v)];
  const Rational& len = b.length(m.alpha);
  if (fv.is_vertex())
    m.start = 0;
  else
    m.start = is_forward(m.alpha) ? fv.offset : Rational(len - fv.offset);
  m.t_geom = len - m.start;

  // Rate of change of the image length of each edge at v, per unit of t.
  std::vector<int> rate(static_cast<std::size_t>(a.edge_count()), 0);
  std::vector<char> touches(static_cast<std::size_t>(a.edge_count()), 0);
  for (OrientedEdge oe : a.star(v)) {
    auto img = f.image(oe);
    touches[static_cast<std::size_t>(edge_of(oe))] = 1;
    if (!img.empty() && img.front().edge == m.alpha) {
      --rate[static_cast<std::size_t>(edge_of(oe))];
      m.t_geom = std::min(m.t_geom, img.front().length());
    } else {
      ++rate[static_cast<std::size_t>(edge_of(oe))];
    }
  }
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    if (!touches[static_cast<std::size_t>(e)] || in_max[static_cast<std::size_t>(e)]) continue;
    Rational sk = sa.per_edge[static_cast<std::size_t>(e)];
    Rational vk = Rational(rate[static_cast<std::size_t>(e)]) / a.edge(e).length;
    for (EdgeId n = 0; n < a.edge_count(); ++n) {
      if (!touches[static_cast<std::size_t>(n)] || !in_max[static_cast<std::size_t>(n)]) continue;
      Rational vn = Rational(rate[static_cast<std::size_t>(n)]) / a.edge(n).length;
      if (vk <= vn) continue;
      Rational t = (sa.s_f - sk) / (vk - vn);
      if (!m.has_cross || t < m.t_cross) {
        m.t_cross = t;
        m.has_cross = true;
      }
    }
  }
  return m;
}

}  // namespace

Rational next_v_step(const PLMap& f, Vertex v) {
  auto m = move_geometry(f, v);
  return m.has_cross ? std::min(m.t_geom, m.t_cross) : m.t_geom;
}

PLMap move_vertex(const PLMap& f, Vertex v, const Rational& t) {
  auto geo = move_geometry(f, v);
  if (t <= 0 || t > geo.t_geom) throw InvalidInput("move length outside the linear range");
  const auto& a = f.source;
  const auto& b = f.target;
  Segment m{geo.alpha, geo.start, geo.start + t};
  Segment back = reversed(b, m);
  PLMap g = f;
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    const auto& d = a.edge(e);
    if (d.from != v && d.to != v) continue;
    SegmentPath p;
    if (d.from == v) p.push_back(back);
    const auto& img = f.edge_image[static_cast<std::size_t>(e)];
    p.insert(p.end(), img.begin(), img.end());
    if (d.to == v) p.push_back(m);
    g.edge_image[static_cast<std::size_t>(e)] = tighten(b, p, TightenMode::path);
  }
  g.vertex_image[static_cast<std::size_t>(v)] = end_point(b, m);
  if (v == a.basepoint()) {
    SegmentPath p = f.base_path;
    p.push_back(m);
    g.base_path = tighten(b, p, TightenMode::path);
  }
  return g;
}

PLMap next_v(const PLMap& f, Vertex v) {
  PLMap g = move_vertex(f, v, next_v_step(f, v));
  if (stretch_analysis(g).s_f > stretch_analysis(f).s_f)
    throw InvariantViolation("Next_v increased the stretching factor");
  return g;
}

namespace {

/// Sign of the change of |f(e)| at each end when that end moves along dir.
int end_rate(const PLMap& f, OrientedEdge end, OrientedEdge dir) {
  auto img = f.image(end);
  return !img.empty() && img.front().edge == dir ? -1 : 1;
}

struct Germ {
  OrientedEdge edge;
  Rational start;
};

/// Rates of change of every edge's image length for speeds s along dirs.
std::vector<Rational> edge_rates(const PLMap& f, const std::vector<OrientedEdge>& dir,
                                 const std::vector<Rational>& s) {
  const auto& a = f.source;
  std::vector<Rational> out;
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    const auto& d = a.edge(e);
    auto fu = static_cast<std::size_t>(d.from);
    auto fv = static_cast<std::size_t>(d.to);
    Rational r = 0;
    if (f.edge_image[static_cast<std::size_t>(e)].empty()) {
      Rational su = dir[fu] >= 0 ? s[fu] : Rational(0);
      Rational sv = dir[fv] >= 0 ? s[fv] : Rational(0);
      if (dir[fu] >= 0 && dir[fu] == dir[fv])
        r = abs(su - sv);
      else
        r = su + sv;
    } else {
      if (dir[fu] >= 0) r += end_rate(f, forward_of(e), dir[fu]) * s[fu];
      if (dir[fv] >= 0) r += end_rate(f, reversed(forward_of(e)), dir[fv]) * s[fv];
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace

std::optional<JointMove> joint_descent(const PLMap& f) {
  const auto& a = f.source;
  const auto& b = f.target;
  auto sa = stretch_analysis(f);
  const std::size_t nv = static_cast<std::size_t>(a.vertex_count());

  std::vector<std::vector<Germ>> germs(nv);
  for (Vertex v = 0; v < a.vertex_count(); ++v)
    for (OrientedEdge oe : a.star(v)) {
      auto img = f.image(oe);
      if (img.empty()) continue;
      auto& gs = germs[static_cast<std::size_t>(v)];
      if (std::none_of(gs.begin(), gs.end(), [&](const Germ& g) { return g.edge == img.front().edge; }))
        gs.push_back({img.front().edge, img.front().from});
    }
  std::size_t combos = 1;
  for (const auto& gs : germs) {
    combos *= gs.size() + 1;
    if (combos > 20000) return std::nullopt;
  }

  std::optional<JointMove> best;
  std::vector<std::size_t> pick(nv, 0);
  for (std::size_t c = 1; c < combos; ++c) {
    std::size_t rest = c;
    std::vector<std::size_t> var(nv, nv);
    std::size_t nvar = 0;
    for (std::size_t v = 0; v < nv; ++v) {
      pick[v] = rest % (germs[v].size() + 1);
      rest /= germs[v].size() + 1;
      if (pick[v]) var[v] = nvar++;
    }
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    for (EdgeId e : sa.a_max) {
      const auto& d = a.edge(e);
      std::vector<Rational> row(nvar + 1, Rational(0));
      auto u = static_cast<std::size_t>(d.from);
      auto w = static_cast<std::size_t>(d.to);
      if (pick[u]) row[var[u]] += end_rate(f, forward_of(e), germs[u][pick[u] - 1].edge);
      if (pick[w]) row[var[w]] += end_rate(f, reversed(forward_of(e)), germs[w][pick[w] - 1].edge);
      row[nvar] = d.length;
      rows.push_back(std::move(row));
      rhs.push_back(0);
    }
    for (std::size_t k = 0; k < nvar; ++k) {
      std::vector<Rational> row(nvar + 1, Rational(0));
      row[k] = 1;
      rows.push_back(std::move(row));
      rhs.push_back(1);
    }
    std::vector<Rational> obj(nvar + 1, Rational(0));
    obj[nvar] = 1;
    auto sol = detail::maximize(rows, rhs, obj);
    if (!sol || sol->value <= 0) continue;
    if (best && sol->value <= best->rate) continue;
    JointMove m;
    m.direction.assign(nv, -1);
    m.start.assign(nv, Rational(0));
    m.speed.assign(nv, Rational(0));
    m.rate = sol->value;
    for (std::size_t v = 0; v < nv; ++v)
      if (pick[v] && sol->x[var[v]] > 0) {
        m.direction[v] = germs[v][pick[v] - 1].edge;
        m.start[v] = germs[v][pick[v] - 1].start;
        m.speed[v] = sol->x[var[v]];
      }
    best = std::move(m);
  }
  if (!best) return std::nullopt;

  // Largest step keeping every image length affine and no edge above the
  // falling maximum.
  JointMove& m = *best;
  std::optional<Rational> t;
  auto cap = [&](const Rational& x) {
    if (!t || x < *t) t = x;
  };
  for (std::size_t v = 0; v < nv; ++v)
    if (m.direction[v] >= 0) cap((b.length(m.direction[v]) - m.start[v]) / m.speed[v]);
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    const auto& img = f.edge_image[static_cast<std::size_t>(e)];
    if (img.empty()) continue;
    const auto& d = a.edge(e);
    auto u = static_cast<std::size_t>(d.from);
    auto w = static_cast<std::size_t>(d.to);
    Rational cu = m.direction[u] >= 0 && end_rate(f, forward_of(e), m.direction[u]) < 0 ? m.speed[u] : Rational(0);
    Rational cw = m.direction[w] >= 0 && end_rate(f, reversed(forward_of(e)), m.direction[w]) < 0 ? m.speed[w] : Rational(0);
    if (img.size() == 1) {
      // One segment: an end moving along it extends it instead.
      OrientedEdge oe = img.front().edge;
      Rational shrink = cu + cw;
      if (m.direction[u] == reversed(oe)) shrink -= m.speed[u];
      if (m.direction[w] == oe) shrink -= m.speed[w];
      if (shrink > 0) cap(img.front().length() / shrink);
    } else {
      if (cu > 0) cap(img.front().length() / cu);
      if (cw > 0) cap(img.back().length() / cw);
    }
  }
  auto rates = edge_rates(f, m.direction, m.speed);
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    const auto i = static_cast<std::size_t>(e);
    if (sa.per_edge[i] == sa.s_f) continue;
    Rational climb = rates[i] / a.edge(e).length + m.rate;
    if (climb > 0) cap((sa.s_f - sa.per_edge[i]) / climb);
  }
  m.step = *t;
  return best;
}

PLMap apply_joint_move(const PLMap& f, const JointMove& m) {
  const auto& a = f.source;
  const auto& b = f.target;
  std::vector<std::optional<Segment>> seg(static_cast<std::size_t>(a.vertex_count()));
  for (std::size_t v = 0; v < seg.size(); ++v)
    if (m.direction[v] >= 0)
      seg[v] = Segment{m.direction[v], m.start[v], m.start[v] + m.step * m.speed[v]};
  PLMap g = f;
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    const auto& d = a.edge(e);
    const auto& su = seg[static_cast<std::size_t>(d.from)];
    const auto& sw = seg[static_cast<std::size_t>(d.to)];
    if (!su && !sw) continue;
    SegmentPath p;
    if (su) p.push_back(reversed(b, *su));
    const auto& img = f.edge_image[static_cast<std::size_t>(e)];
    p.insert(p.end(), img.begin(), img.end());
    if (sw) p.push_back(*sw);
    g.edge_image[static_cast<std::size_t>(e)] = tighten(b, p, TightenMode::path);
  }
  for (std::size_t v = 0; v < seg.size(); ++v)
    if (seg[v]) g.vertex_image[v] = end_point(b, *seg[v]);
  if (const auto& sb = seg[static_cast<std::size_t>(a.basepoint())]) {
    SegmentPath p = f.base_path;
    p.push_back(*sb);
    g.base_path = tighten(b, p, TightenMode::path);
  }
  return g;
}

OptimizeResult optimize_pl_map(const MarkedMetricGraph& a, const MarkedMetricGraph& b,
                               int max_moves) {
  OptimizeOptions o;
  o.max_moves = max_moves;
  return optimize_pl_map(a, b, o);
}

OptimizeResult optimize_pl_map(const MarkedMetricGraph& a, const MarkedMetricGraph& b,
                               const OptimizeOptions& options) {
  require_valid(a);
  require_valid(b);
  OptimizeResult r{initial_pl_map(a, b), 0, 0, lambda_r(a, b).value};
  while (true) {
    auto sa = stretch_analysis(r.map);
    if (sa.s_f == r.lambda) return r;
    if (r.moves >= options.max_moves)
      throw BudgetExhausted("no certificate after " + std::to_string(r.moves) +
                            " moves: best S_f " + to_string(sa.s_f) + ", gap " +
                            to_string(Rational(sa.s_f - r.lambda)));
    if (options.joint) {
      if (auto m = joint_descent(r.map)) {
        PLMap g = apply_joint_move(r.map, *m);
        if (stretch_analysis(g).s_f >= sa.s_f)
          throw InvariantViolation("joint move did not lower the stretching factor");
        r.map = std::move(g);
        ++r.moves;
        ++r.joint_moves;
        continue;
      }
    }
    if (sa.boundary.empty())
      throw InvariantViolation("optimal map with S_f " + to_string(sa.s_f) +
                               " differs from the candidate value " + to_string(r.lambda));
    r.map = next_v(r.map, sa.boundary.front());
    ++r.moves;
  }
}

}  // namespace cvn
