#include "repro.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "cvn/fixtures.hpp"
#include "cvn/folding.hpp"
#include "cvn/geodesics.hpp"
#include "cvn/rational.hpp"
#include "cvn/stretch.hpp"

namespace cvn::cli {

namespace fx = fixtures;

std::string Interval::str() const {
  if (empty()) return "empty";
  if (lo == hi) return "{" + to_string(lo) + "}";
  return std::string(lo_open ? "(" : "[") + to_string(lo) + ", " + to_string(hi) + (hi_open ? ")" : "]");
}

namespace {

/// a*alpha + b <= 0.
void restrict(Interval& in, const Rational& a, const Rational& b) {
  if (a == 0) {
    if (b > 0) in = {1, 0, false, false};
    return;
  }
  Rational x = -b / a;
  if (a > 0) {
    if (x < in.hi || (x == in.hi && in.hi_open)) {
      in.hi = x;
      in.hi_open = false;
    }
  } else if (x > in.lo || (x == in.lo && in.lo_open)) {
    in.lo = x;
    in.lo_open = false;
  }
}

Interval meet(Interval x, const Interval& y) {
  if (y.lo > x.lo || (y.lo == x.lo && y.lo_open)) {
    x.lo = y.lo;
    x.lo_open = y.lo_open;
  }
  if (y.hi < x.hi || (y.hi == x.hi && y.hi_open)) {
    x.hi = y.hi;
    x.hi_open = y.hi_open;
  }
  return x;
}

/// l_{T_alpha}(w) = slope * alpha + base.
struct Linear {
  Rational slope;
  Rational base;
};

Linear rose_length(const Word& w) {
  Rational l1 = translation_length(fx::wc_t(Rational(1, 3)), w);
  Rational l2 = translation_length(fx::wc_t(Rational(2, 3)), w);
  Rational slope = (l2 - l1) * 3;
  return {slope, l1 - slope / 3};
}

std::vector<Word> candidate_words(const MarkedMetricGraph& g) {
  std::vector<Word> out;
  for (const auto& c : enumerate_candidates(g)) out.push_back(word_of_loop(g, c.loop));
  return out;
}

}  // namespace

Crossing rose_crossing(const MarkedMetricGraph& p, const MarkedMetricGraph& q) {
  auto pq = lambda_r(p, q);
  auto pc = enumerate_candidates(p);
  std::vector<Word> p_words;
  for (const auto& c : pc) p_words.push_back(word_of_loop(p, c.loop));
  auto t_words = candidate_words(fx::wc_t(Rational(1, 2)));

  std::optional<Crossing> fallback;
  for (std::size_t idx : pq.attained) {
    const Word& w = p_words[idx];
    Rational lp_w = translation_length(p, w);
    Rational lq_w = translation_length(q, w);
    Linear lt_w = rose_length(w);
    Crossing c;
    for (const auto& u : p_words) {
      Rational lp_u = translation_length(p, u);
      Linear lt_u = rose_length(u);
      restrict(c.first, lt_u.slope * lp_w - lt_w.slope * lp_u, lt_u.base * lp_w - lt_w.base * lp_u);
    }
    for (const auto& v : t_words) {
      Rational lq_v = translation_length(q, v);
      Linear lt_v = rose_length(v);
      restrict(c.second, lq_v * lt_w.slope - lq_w * lt_v.slope, lq_v * lt_w.base - lq_w * lt_v.base);
    }
    c.both = meet(c.first, c.second);
    if (!c.both.empty()) return c;
    if (!fallback) fallback = c;
  }
  return *fallback;
}

namespace {

/// Edge names of the loop realising w, sorted, orientation dropped.
std::string loop_letters(const MarkedMetricGraph& g, const Word& w, const std::string& names) {
  std::string s;
  for (OrientedEdge oe : loop_of_word(g, w)) s += names[static_cast<std::size_t>(edge_of(oe))];
  std::sort(s.begin(), s.end());
  return s;
}

std::string sorted_letters(std::string name) {
  std::string s;
  for (char c : name)
    if (std::isupper(static_cast<unsigned char>(c))) s += c;
  std::sort(s.begin(), s.end());
  return s;
}

struct TableRow {
  std::string x_loop;  // loop name in the source graph
  std::string word;
  std::string y_loop;  // corresponding loop in Y
  std::function<Rational(const Rational&)> expected;
};

void self_check(bool ok, const std::string& what) {
  if (!ok) throw InvariantViolation("fixture self-check failed: " + what);
}

}  // namespace

Report repro_theta_pair() {
  const auto x = fx::wc_x();
  const auto y = fx::wc_y();
  const std::vector<Rational> alphas{Rational(3, 8), Rational(1, 2), Rational(5, 8), Rational(3, 4)};
  Report r;

  // Loops AB, BC, AC of X against T_alpha and Y.
  const std::vector<TableRow> from_x{
      {"AB", "a", "EF", [](const Rational& a) { return Rational(2 * a); }},
      {"BC", "b", "GF", [](const Rational& a) { return Rational(6 * (1 - a) / 5); }},
      {"AC", "aB", "EFGF", [](const Rational&) { return Rational(3, 2); }}};
  const std::vector<Rational> y_over_x{Rational(5, 3), Rational(3, 5), Rational(2)};

  auto& xy = r.section("x_to_y", {"loop_x", "word", "length_x", "loop_y", "length_y", "ratio", "expected", "match"});
  for (std::size_t i = 0; i < from_x.size(); ++i) {
    const auto& row = from_x[i];
    Word w = parse_word(row.word, 2);
    self_check(loop_letters(x, w, "ABC") == sorted_letters(row.x_loop), row.x_loop + " in X");
    self_check(loop_letters(y, w, "EFG") == sorted_letters(row.y_loop), row.y_loop + " in Y");
    Rational lx = translation_length(x, w);
    Rational ly = translation_length(y, w);
    Rational ratio = ly / lx;
    self_check(ratio == y_over_x[i], "l_Y/l_X of " + row.x_loop);
    xy.add({row.x_loop, row.word, to_string(lx), row.y_loop, to_string(ly), to_string(ratio),
            to_string(y_over_x[i]), bool_cell(ratio == y_over_x[i])});
  }

  auto& xt = r.section("x_to_t", {"alpha", "loop_x", "word", "length_x", "length_t", "ratio", "expected", "match"});
  for (const auto& a : alphas) {
    auto t = fx::wc_t(a);
    for (const auto& row : from_x) {
      Word w = parse_word(row.word, 2);
      Rational lx = translation_length(x, w);
      Rational lt = translation_length(t, w);
      Rational want = row.expected(a);
      self_check(lt / lx == want, "l_T/l_X of " + row.x_loop + " at " + to_string(a));
      xt.add({to_string(a), row.x_loop, row.word, to_string(lx), to_string(lt), to_string(lt / lx),
              to_string(want), bool_cell(lt / lx == want)});
    }
  }

  const std::vector<TableRow> from_t{
      {"a", "a", "EF", [](const Rational& a) { return Rational(5 / (6 * a)); }},
      {"b", "b", "GF", [](const Rational& a) { return Rational(1 / (2 * (1 - a))); }},
      {"ab", "ab", "EG", [](const Rational&) { return Rational(2, 3); }},
      {"aB", "aB", "EFGF", [](const Rational&) { return Rational(4, 3); }}};
  auto& ty = r.section("t_to_y", {"alpha", "loop_t", "length_t", "loop_y", "length_y", "ratio", "expected", "match"});
  for (const auto& a : alphas) {
    auto t = fx::wc_t(a);
    for (const auto& row : from_t) {
      Word w = parse_word(row.word, 2);
      self_check(loop_letters(y, w, "EFG") == sorted_letters(row.y_loop), row.y_loop + " in Y");
      Rational lt = translation_length(t, w);
      Rational ly = translation_length(y, w);
      Rational want = row.expected(a);
      self_check(ly / lt == want, "l_Y/l_T of " + row.x_loop + " at " + to_string(a));
      ty.add({to_string(a), row.x_loop, to_string(lt), row.y_loop, to_string(ly), to_string(ly / lt),
              to_string(want), bool_cell(ly / lt == want)});
    }
  }

  auto& geo = r.section("crossing", {"metric", "from_x_to_t", "from_t_to_y", "alpha"});
  Crossing right = rose_crossing(x, y);
  // d_L(X, T) + d_L(T, Y) = d_R(Y, T) + d_R(T, X).
  Crossing left = rose_crossing(y, x);
  geo.add({"d_R", right.first.str(), right.second.str(), right.both.str()});
  geo.add({"d_L", left.second.str(), left.first.str(), left.both.str()});

  auto& check = r.section("triangle", {"alpha", "d_R_equality", "d_L_equality"});
  for (const auto& a : alphas) {
    auto t = fx::wc_t(a);
    bool dr = check_dr_geodesic({x, t, y}).ok;
    bool dl = check_dr_geodesic({y, t, x}).ok;
    self_check(dr == right.both.contains(a) && dl == left.both.contains(a), "crossing at " + to_string(a));
    check.add({to_string(a), bool_cell(dr), bool_cell(dl)});
  }

  bool disjoint = meet(right.both, left.both).empty();
  auto& verdict = r.section("verdict", {"alpha_R", "alpha_L", "conclusion"});
  verdict.add({right.both.str(), left.both.str(),
               disjoint ? "no simultaneous d_R/d_L geodesic: no d-geodesic joins X and Y"
                        : "a simultaneous d_R/d_L geodesic exists"});
  return r;
}

namespace {

std::vector<MarkedMetricGraph> polygrowth_shrink(int k) {
  std::vector<MarkedMetricGraph> out;
  for (int j = 0; j <= 4; ++j) out.push_back(fx::rose2(Rational(k + 1) - Rational(k * j) / 4, k + 1));
  return out;
}

}  // namespace

Report repro_polygrowth() {
  Report r;
  auto& table = r.section("speeds", {"k", "i", "delta", "time", "local_speed", "toward_speed", "ratio",
                                     "expected", "match"});
  auto& verdict = r.section("quasi_geodesic", {"k", "piece", "lambda", "epsilon", "ok", "worst_margin"});
  const std::vector<Rational> deltas{0, Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  for (int k : {2, 3, 5}) {
    auto path = fast_fold(prepare_folding_setup(fx::polygrowth_source(k), fx::polygrowth_target(k)));
    if (path.event_count() != static_cast<std::size_t>(k))
      throw InvariantViolation("unexpected event count for k = " + std::to_string(k));
    std::vector<MarkedMetricGraph> fold;
    for (int i = 0; i < k; ++i)
      for (const auto& d : deltas) {
        // The target has volume one, twice smaller than in the worked example.
        Rational t = (i + d) / 2;
        auto sample = sample_path(path, t);
        auto sp = speeds(sample);
        Rational want = (k + 2 - i - 2 * d) / (2 * k + 1 - 2 * i - 2 * d);
        table.add({std::to_string(k), std::to_string(i), to_string(d), to_string(t), to_string(sp.local),
                   to_string(sp.toward), to_string(sp.ratio), to_string(want), bool_cell(sp.ratio == want)});
        fold.push_back(std::move(sample.graph));
      }
    fold.push_back(path.snapshots.back());
    auto shrink = polygrowth_shrink(k);
    std::vector<MarkedMetricGraph> all = shrink;
    all.insert(all.end(), fold.begin() + 1, fold.end());
    auto add = [&](const char* piece, const std::vector<MarkedMetricGraph>& pts, int lambda) {
      auto q = check_quasi_geodesic(pts, lambda, 0);
      verdict.add({std::to_string(k), piece, std::to_string(lambda), "0", bool_cell(q.ok),
                   format_decimal(q.worst_margin)});
    };
    add("shrink", shrink, 2);
    add("fold", fold, 2);
    add("overall", all, 4);
  }
  return r;
}

Rational incompleteness_printed_form(int n, int k, int m) {
  return Rational(((k + m) * n - 1) * k) / Rational((k + m) * (k * n - 1));
}

Rational incompleteness_recomputed_form(int n, int k, int m) {
  return Rational((k + m) * (k * n - k + 1)) / Rational(k * ((k + m) * n - (k + m) + 1));
}

Report repro_incompleteness() {
  const int n = 3;
  Report r;
  auto& forms = r.section("lambda_r", {"k", "m", "computed", "printed_form", "recomputed_form", "matches_printed",
                                       "matches_recomputed"});
  for (int k = 1; k <= 10; ++k)
    for (int m = 1; m <= 3; ++m) {
      Rational v = lambda_r_normalized(fx::thin_rose(n, k), fx::thin_rose(n, k + m));
      Rational p = incompleteness_printed_form(n, k, m);
      Rational q = incompleteness_recomputed_form(n, k, m);
      forms.add({std::to_string(k), std::to_string(m), to_string(v), to_string(p), to_string(q),
                 bool_cell(v == p), bool_cell(v == q)});
    }
  auto& seq = r.section("sequence", {"k", "lambda_r_next", "d_R_next", "systole", "thin_1/20"});
  for (int k = 1; k <= 10; ++k) {
    Rational v = lambda_r_normalized(fx::thin_rose(n, k), fx::thin_rose(n, k + 1));
    auto s = systole_and_thin_test(fx::thin_rose(n, k), Rational(1, 20));
    seq.add({std::to_string(k), to_string(v), log_cell(v), to_string(s.value), bool_cell(s.thin)});
  }
  auto& note = r.section("note", {"text"});
  note.add({"printed closed form ((k+m)n-1)k/((k+m)(kn-1)) disagrees with the computed factors; "
            "recomputed closed form (k+m)(kn-k+1)/(k((k+m)n-(k+m)+1))"});
  note.add({"d_R(A_k, A_k+1) decreases to 0 and the systole tends to 0: right Cauchy with no limit in CV_n"});
  return r;
}

Report repro_orbit() {
  Report r;
  const auto rose = fx::rose2(1, 1);
  auto& rows = r.section("orbit", {"fixture", "h", "lambda_r", "lambda_l", "lambda", "d"});
  for (const auto& [name, phi] : {std::pair{"exponential", fx::exponential_phi()},
                                  std::pair{"polynomial", fx::polynomial_phi()}})
    for (int h = -4; h <= 4; ++h) {
      auto ph = apply_automorphism_to_marking(rose, phi.power(h));
      auto rep = stretch_report(ph, rose);
      rows.add({name, std::to_string(h), to_string(rep.lambda_r), to_string(rep.lambda_l),
                to_string(rep.lambda), format_decimal(rep.d)});
    }

  // Linear envelope and subadditivity for the exponential fixture.
  const auto phi = fx::exponential_phi();
  auto& env = r.section("envelope", {"h", "log_lambda", "per_step"});
  double c1 = 1e300, c2 = 0;
  for (int h = 1; h <= 6; ++h) {
    auto ph = apply_automorphism_to_marking(rose, phi.power(h));
    double l = stretch_report(ph, rose).d;
    c1 = std::min(c1, l / h);
    c2 = std::max(c2, l / h);
    env.add({std::to_string(h), format_decimal(l), format_decimal(l / h)});
  }
  auto& fit = r.section("fit", {"c1", "c2", "subadditive"});
  const Rational step = stretch_report(apply_automorphism_to_marking(rose, phi), rose).lambda;
  bool sub = true;
  for (int h = 1; h <= 6; ++h)
    for (int m = 0; m <= 3; ++m) {
      auto a = apply_automorphism_to_marking(rose, phi.power(h + m));
      auto b = apply_automorphism_to_marking(rose, phi.power(m));
      sub = sub && stretch_report(a, b).lambda <= pow(step, static_cast<unsigned>(h));
    }
  fit.add({format_decimal(c1), format_decimal(c2), bool_cell(sub)});
  return r;
}

Report run_repro(const std::string& name) {
  if (name == "wiest-coulbois") return repro_theta_pair();
  if (name == "polygrowth") return repro_polygrowth();
  if (name == "incompleteness") return repro_incompleteness();
  if (name == "orbit") return repro_orbit();
  throw InvalidInput("unknown reproduction '" + name + "'");
}

}  // namespace cvn::cli
