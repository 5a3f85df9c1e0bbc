#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <random>

#include "cvn/fixtures.hpp"
#include "cvn/folding.hpp"
#include "cvn/geodesics.hpp"
#include "cvn/rational.hpp"
#include "cvn/stretch.hpp"
#include "io.hpp"
#include "repro.hpp"

namespace cvn::cli {

namespace {

Rational rational_arg(const std::string& s) {
  try {
    return parse_rational(s);
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
}

void same_rank(const MarkedMetricGraph& a, const MarkedMetricGraph& b) {
  if (a.rank() != b.rank())
    throw RankMismatch("rank " + std::to_string(a.rank()) + " against rank " + std::to_string(b.rank()));
}

std::string segments_cell(const SegmentPath& p) {
  std::string out;
  for (const auto& s : p) {
    if (!out.empty()) out += ' ';
    int id = edge_of(s.edge) + 1;
    out += std::to_string(is_forward(s.edge) ? id : -id) + "[" + to_string(s.from) + "," + to_string(s.to) + "]";
  }
  return out;
}

struct Options {
  std::string format = "tsv";
  long seed = 1;

  std::vector<std::string> files;
  std::string file_a, file_b;
  std::vector<std::string> words;
  std::string target;
  std::string metric;
  bool witness = false;
  int sample_words = 0;
  int budget = 10000;
  bool next_v_only = false;
  int samples = 3;
  std::string trace;
  std::string strategy = "simultaneous";
  std::string epsilon;
  std::string lambda;
  std::string graph;
  std::string fixture = "exponential";
  std::string phi, phi_inverse;
  int from = -4, to = 4;
  std::string cap;
  long max_pairs = 40000;
  bool serial = false;
  std::string repro;
};

Report cmd_validate(const Options& o) {
  Report r;
  auto& s = r.section("validate", {"file", "ok", "message", "rank", "vertices", "edges", "volume"});
  for (const auto& f : o.files) {
    auto g = load_graph(f);
    s.add({f, "true", "", std::to_string(g.rank()), std::to_string(g.vertex_count()),
           std::to_string(g.edge_count()), to_string(volume(g))});
  }
  return r;
}

Report cmd_tlength(const Options& o) {
  auto g = load_graph(o.file_a);
  Report r;
  auto& s = r.section("tlength", {"word", "cyclic_length", "translation_length", "loop"});
  for (const auto& text : o.words) {
    Word w = parse_word(text, g.rank());
    s.add({format_word(w), std::to_string(cyclic_length(w)), to_string(translation_length(g, w)),
           format_edge_path(loop_of_word(g, w))});
  }
  return r;
}

Report cmd_candidates(const Options& o) {
  auto g = load_graph(o.file_a);
  std::optional<MarkedMetricGraph> b;
  if (!o.target.empty()) {
    b = load_graph(o.target);
    same_rank(g, *b);
  }
  auto cands = enumerate_candidates(g);
  std::vector<Rational> ratios;
  if (b) ratios = candidate_ratios(g, cands, *b);
  Report r;
  std::vector<std::string> cols{"index", "shape", "loop", "word", "length"};
  if (b) cols.push_back("ratio");
  auto& s = r.section("candidates", cols);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    std::vector<std::string> row{std::to_string(i + 1), shape_name(cands[i].shape), format_edge_path(cands[i].loop),
                                 format_word(word_of_loop(g, cands[i].loop)), to_string(loop_length(g, cands[i].loop))};
    if (b) row.push_back(to_string(ratios[i]));
    s.add(std::move(row));
  }
  return r;
}

Report cmd_distance(const Options& o) {
  auto a = load_graph(o.file_a);
  auto b = load_graph(o.file_b);
  same_rank(a, b);
  auto rep = stretch_report(a, b);
  Report r;
  if (o.metric.empty()) {
    auto& s = r.section("distance", {"lambda_r", "lambda_l", "lambda", "lambda_r_normalized",
                                     "lambda_l_normalized", "d", "d_R", "d_L"});
    s.add({to_string(rep.lambda_r), to_string(rep.lambda_l), to_string(rep.lambda),
           to_string(rep.lambda_r_normalized), to_string(rep.lambda_l_normalized), format_decimal(rep.d),
           format_decimal(rep.d_r), format_decimal(rep.d_l)});
  } else {
    auto& s = r.section("distance", {"metric", "exp_distance", "distance"});
    Rational v = o.metric == "d"    ? Rational(rep.lambda_r_normalized * rep.lambda_l_normalized)
                 : o.metric == "dR" ? rep.lambda_r_normalized
                                    : rep.lambda_l_normalized;
    s.add({o.metric, to_string(v), log_cell(v)});
  }
  if (o.witness) {
    auto& w = r.section("witness", {"direction", "shape", "loop", "word"});
    w.add({"right", shape_name(rep.witness_r.shape), format_edge_path(rep.witness_r.loop),
           format_word(word_of_loop(a, rep.witness_r.loop))});
    w.add({"left", shape_name(rep.witness_l.shape), format_edge_path(rep.witness_l.loop),
           format_word(word_of_loop(b, rep.witness_l.loop))});
  }
  if (o.sample_words > 0) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(o.seed));
    std::uniform_int_distribution<int> len(1, 12), gen(1, a.rank()), sign(0, 1);
    Rational best = 0;
    Word best_word(a.rank());
    for (int i = 0; i < o.sample_words; ++i) {
      std::vector<Letter> letters;
      int n = len(rng);
      for (int j = 0; j < n; ++j) letters.push_back(sign(rng) ? gen(rng) : -gen(rng));
      Word w = Word::reduce(letters, a.rank());
      if (cyclic_length(w) == 0) continue;
      Rational q = translation_length(b, w) / translation_length(a, w);
      if (q > best) {
        best = q;
        best_word = w;
      }
    }
    if (best > rep.lambda_r) throw InvariantViolation("sampled word exceeds Lambda_R");
    auto& s = r.section("sampled_words", {"count", "seed", "max_ratio", "word", "within_lambda_r"});
    s.add({std::to_string(o.sample_words), std::to_string(o.seed), to_string(best), format_word(best_word),
           bool_cell(best <= rep.lambda_r)});
  }
  return r;
}

Report cmd_optmap(const Options& o) {
  auto a = load_graph(o.file_a);
  auto b = load_graph(o.file_b);
  same_rank(a, b);
  OptimizeOptions opts;
  opts.max_moves = o.budget;
  opts.joint = !o.next_v_only;
  auto res = optimize_pl_map(a, b, opts);
  auto an = stretch_analysis(res.map);
  Report r;
  auto& s = r.section("optmap", {"lambda_r", "s_f", "moves", "joint_moves", "optimal"});
  s.add({to_string(res.lambda), to_string(an.s_f), std::to_string(res.moves), std::to_string(res.joint_moves),
         bool_cell(is_optimal(res.map).optimal)});
  auto& v = r.section("vertices", {"vertex", "image"});
  for (Vertex x = 0; x < a.vertex_count(); ++x) {
    const auto& p = res.map.vertex_image[static_cast<std::size_t>(x)];
    v.add({std::to_string(x), p.is_vertex() ? "v" + std::to_string(p.vertex)
                                            : "e" + std::to_string(p.edge + 1) + "@" + to_string(p.offset)});
  }
  auto& e = r.section("edges", {"edge", "length", "image", "stretch", "maximal"});
  for (EdgeId x = 0; x < a.edge_count(); ++x) {
    bool in_max = std::find(an.a_max.begin(), an.a_max.end(), x) != an.a_max.end();
    e.add({std::to_string(x + 1), to_string(a.edge(x).length),
           segments_cell(res.map.edge_image[static_cast<std::size_t>(x)]), to_string(res.map.edge_stretch(x)),
           bool_cell(in_max)});
  }
  return r;
}

Section trace_section(const FoldingPath& path, const std::vector<Rational>& times) {
  Section s{"trace", {"time", "volume", "systole", "local_speed", "toward_speed", "d_R_to_target"}, {}};
  if (path.event_count() == 0) return s;
  for (const auto& t : times) {
    auto row = trace_row(path, t);
    s.add({to_string(row.time), to_string(row.volume), to_string(row.systole), to_string(row.local_speed),
           to_string(row.toward_speed), format_decimal(row.d_r_to_target)});
  }
  return s;
}

Report cmd_foldpath(const Options& o, std::ostream& err) {
  auto a = load_graph(o.file_a);
  auto b = load_graph(o.file_b);
  same_rank(a, b);
  OptimizeOptions opts;
  opts.max_moves = o.budget;
  auto setup = prepare_folding_setup(a, b, opts);
  auto strategy = o.strategy == "single-vertex" ? FoldStrategy::single_vertex : FoldStrategy::simultaneous;
  auto path = fast_fold(setup, strategy);
  Rational eps = o.epsilon.empty() ? Rational(1, 10) : rational_arg(o.epsilon);

  std::vector<Rational> times;
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    times.push_back(path.times[i]);
    if (i + 1 < path.times.size())
      for (int j = 1; j <= o.samples; ++j)
        times.push_back(path.times[i] + (path.times[i + 1] - path.times[i]) * j / (o.samples + 1));
  }

  Report r;
  auto& sum = r.section("setup", {"lambda_r", "moves", "witness", "events", "end_time"});
  sum.add({to_string(setup.lambda), std::to_string(setup.moves), format_word(setup.witness_word),
           std::to_string(path.event_count()), to_string(path.end_time())});

  auto& ev = r.section("events", {"index", "time", "vertices", "edges", "volume", "systole", "thin"});
  for (std::size_t i = 0; i < path.snapshots.size(); ++i) {
    auto g = canonicalize(path.snapshots[i]);
    auto sys = systole_and_thin_test(g, eps);
    ev.add({std::to_string(i), to_string(path.times[i]), std::to_string(g.vertex_count()),
            std::to_string(g.edge_count()), to_string(volume(g)), to_string(sys.value), bool_cell(sys.thin)});
  }

  auto& sp = r.section("speeds", {"time", "local_speed", "toward_speed", "ratio", "thin"});
  auto& res = r.section("residuals", {"time", "residual"});
  const Rational total = lambda_r_normalized(setup.source, setup.target);
  for (const auto& t : times) {
    auto sample = sample_path(path, t);
    if (t < path.end_time()) {
      auto s = speeds(sample);
      sp.add({to_string(t), to_string(s.local), to_string(s.toward), to_string(s.ratio),
              bool_cell(systole_and_thin_test(sample.graph, eps).thin)});
    }
    Rational split = lambda_r_normalized(setup.source, sample.graph) * lambda_r_normalized(sample.graph, setup.target);
    res.add({to_string(t), to_string(Rational(total / split))});
  }

  auto trace = trace_section(path, times);
  if (o.trace.empty()) {
    r.sections.push_back(std::move(trace));
  } else {
    std::ofstream f(o.trace);
    if (!f) throw InvalidInput("cannot write " + o.trace);
    Report tr;
    tr.sections.push_back(std::move(trace));
    render(f, tr, o.format == "json" ? Format::json : Format::tsv);
    err << "trace written to " << o.trace << '\n';
  }

  auto& tot = r.section("length", {"d_R", "d_R_shrink", "d_R_fold", "exact_sum"});
  Rational whole = lambda_r_normalized(a, b);
  Rational shrink = lambda_r_normalized(a, setup.source);
  tot.add({log_cell(whole), log_cell(shrink), log_cell(total), bool_cell(whole == shrink * total)});
  return r;
}

Report cmd_checkgeod(const Options& o) {
  std::vector<MarkedMetricGraph> pts;
  for (const auto& f : o.files) {
    pts.push_back(load_graph(f));
    same_rank(pts.front(), pts.back());
  }
  const auto metric = o.metric == "dR" ? PathMetric::right : PathMetric::symmetric;
  Report r;
  auto& s = r.section("checkgeod", {"check", "ok", "detail"});
  if (pts.size() >= 3) {
    auto g = check_dr_geodesic(pts);
    s.add({"d_R_geodesic", bool_cell(g.ok),
           g.ok ? "witness " + format_word(g.witness)
                : "triple " + std::to_string(g.violation[0] + 1) + "," + std::to_string(g.violation[1] + 1) + "," +
                      std::to_string(g.violation[2] + 1)});
  } else {
    s.add({"d_R_geodesic", "n/a", "needs at least 3 points"});
  }
  if (pts.size() >= 4) {
    auto fp = check_four_point(pts.size(), [&](std::size_t i, std::size_t j) {
      return exp_distance(pts[i], pts[j], metric);
    });
    std::string detail;
    if (!fp.ok)
      for (auto i : fp.violation) detail += (detail.empty() ? "" : ",") + std::to_string(i + 1);
    s.add({"four_point", bool_cell(fp.ok), detail});
  } else {
    s.add({"four_point", "n/a", "needs at least 4 points"});
  }
  if (!o.lambda.empty()) {
    Rational lam = rational_arg(o.lambda);
    Rational eps = o.epsilon.empty() ? Rational(0) : rational_arg(o.epsilon);
    auto q = check_quasi_geodesic(pts, lam, eps, metric);
    s.add({"quasi_geodesic", bool_cell(q.ok),
           "worst_margin " + format_decimal(q.worst_margin) + " at " + std::to_string(q.first + 1) + "," +
               std::to_string(q.second + 1)});
  }
  return r;
}

Report cmd_orbit(const Options& o) {
  MarkedMetricGraph g = o.graph.empty() ? fixtures::rose2(1, 1) : load_graph(o.graph);
  AutomorphismPair phi;
  if (!o.phi.empty()) {
    if (o.phi_inverse.empty()) throw InvalidInput("--phi needs --phi-inverse");
    auto split = [&](const std::string& text) {
      std::vector<Word> out;
      std::stringstream ss(text);
      std::string tok;
      while (std::getline(ss, tok, ',')) out.push_back(parse_word(tok, g.rank()));
      return out;
    };
    phi = {g.rank(), split(o.phi), split(o.phi_inverse)};
    if (static_cast<int>(phi.forward.size()) != g.rank() || static_cast<int>(phi.inverse.size()) != g.rank())
      throw RankMismatch("automorphism rank differs from the graph rank");
    auto v = validate_automorphism_pair(phi);
    if (!v) throw InvalidInput(v.message);
  } else {
    if (g.rank() != 2) throw RankMismatch("the built-in automorphisms have rank 2");
    phi = o.fixture == "polynomial" ? fixtures::polynomial_phi() : fixtures::exponential_phi();
  }
  if (o.from > o.to) throw InvalidInput("--from exceeds --to");
  Report r;
  auto& s = r.section("orbit", {"h", "lambda_r", "lambda_l", "lambda", "d"});
  for (int h = o.from; h <= o.to; ++h) {
    auto rep = stretch_report(apply_automorphism_to_marking(g, phi.power(h)), g);
    s.add({std::to_string(h), to_string(rep.lambda_r), to_string(rep.lambda_l), to_string(rep.lambda),
           format_decimal(rep.d)});
  }
  return r;
}

Report cmd_bcc(const Options& o) {
  auto a = load_graph(o.file_a);
  auto b = load_graph(o.file_b);
  same_rank(a, b);
  auto res = optimize_pl_map(a, b, o.budget);
  CancellationOptions opts;
  if (!o.cap.empty()) opts.length_cap = rational_arg(o.cap);
  if (o.max_pairs <= 0) throw InvalidInput("--max-pairs must be positive");
  opts.max_pairs = static_cast<std::size_t>(o.max_pairs);
  opts.parallel = !o.serial;
  auto c = bounded_cancellation_bound(res.map, opts);
  Report r;
  auto& s = r.section("bcc", {"bound", "k", "length_cap", "pairs", "truncated", "alpha", "beta"});
  s.add({to_string(c.bound), to_string(c.k), to_string(c.length_cap), std::to_string(c.pairs),
         bool_cell(c.truncated), format_edge_path(c.alpha), format_edge_path(c.beta)});
  return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations in Outer Space", "cvn"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"tsv", "json"}));
  app.add_option("--seed", o.seed, "Seed for sampled words");

  auto* validate = app.add_subcommand("validate", "Check graph documents");
  validate->add_option("files", o.files)->required()->check(CLI::ExistingFile);

  auto* tlength = app.add_subcommand("tlength", "Translation lengths of words");
  tlength->add_option("graph", o.file_a)->required();
  tlength->add_option("words", o.words)->required();

  auto* candidates = app.add_subcommand("candidates", "Candidate loops");
  candidates->add_option("graph", o.file_a)->required();
  candidates->add_option("--target", o.target, "Also list ratios against this graph");

  auto* distance = app.add_subcommand("distance", "Stretching factors and distances");
  distance->add_option("a", o.file_a)->required();
  distance->add_option("b", o.file_b)->required();
  distance->add_option("--metric", o.metric)->check(CLI::IsMember({"d", "dR", "dL"}));
  distance->add_flag("--witness", o.witness);
  distance->add_option("--sample-words", o.sample_words, "Compare random words against Lambda_R")
      ->check(CLI::NonNegativeNumber);

  auto* optmap = app.add_subcommand("optmap", "Optimal PL map");
  optmap->add_option("a", o.file_a)->required();
  optmap->add_option("b", o.file_b)->required();
  optmap->add_option("--budget", o.budget, "Move budget")->check(CLI::PositiveNumber);
  optmap->add_flag("--next-v-only", o.next_v_only, "Disable joint moves");

  auto* foldpath = app.add_subcommand("foldpath", "Fast folding path");
  foldpath->add_option("a", o.file_a)->required();
  foldpath->add_option("b", o.file_b)->required();
  foldpath->add_option("--samples", o.samples, "Samples per event interval")->check(CLI::NonNegativeNumber);
  foldpath->add_option("--trace", o.trace, "Write the trace here");
  foldpath->add_option("--strategy", o.strategy)->check(CLI::IsMember({"simultaneous", "single-vertex"}));
  foldpath->add_option("--epsilon", o.epsilon, "Thin-part threshold");
  foldpath->add_option("--budget", o.budget)->check(CLI::PositiveNumber);

  auto* checkgeod = app.add_subcommand("checkgeod", "Geodesic checks on a sampled path");
  checkgeod->add_option("files", o.files)->required();
  checkgeod->add_option("--metric", o.metric)->check(CLI::IsMember({"d", "dR"}));
  checkgeod->add_option("--lambda", o.lambda);
  checkgeod->add_option("--epsilon", o.epsilon);

  auto* orbit = app.add_subcommand("orbit", "Distances along an automorphism orbit");
  orbit->add_option("--graph", o.graph);
  orbit->add_option("--fixture", o.fixture)->check(CLI::IsMember({"exponential", "polynomial"}));
  orbit->add_option("--phi", o.phi, "Comma-separated generator images");
  orbit->add_option("--phi-inverse", o.phi_inverse);
  orbit->add_option("--from", o.from);
  orbit->add_option("--to", o.to);

  auto* bcc = app.add_subcommand("bcc", "Bounded cancellation constant");
  bcc->add_option("a", o.file_a)->required();
  bcc->add_option("b", o.file_b)->required();
  bcc->add_option("--cap", o.cap);
  bcc->add_option("--max-pairs", o.max_pairs);
  bcc->add_option("--budget", o.budget)->check(CLI::PositiveNumber);
  bcc->add_flag("--serial", o.serial);

  auto* repro = app.add_subcommand("repro", "Worked examples");
  repro->add_option("name", o.repro)
      ->required()
      ->check(CLI::IsMember({"wiest-coulbois", "polygrowth", "incompleteness", "orbit"}));

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ExitCode::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::invalid_input;
  }

  try {
    Report r;
    if (*validate) r = cmd_validate(o);
    else if (*tlength) r = cmd_tlength(o);
    else if (*candidates) r = cmd_candidates(o);
    else if (*distance) r = cmd_distance(o);
    else if (*optmap) r = cmd_optmap(o);
    else if (*foldpath) r = cmd_foldpath(o, err);
    else if (*checkgeod) r = cmd_checkgeod(o);
    else if (*orbit) r = cmd_orbit(o);
    else if (*bcc) r = cmd_bcc(o);
    else r = run_repro(o.repro);
    render(out, r, o.format == "json" ? Format::json : Format::tsv);
    return ExitCode::ok;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return ExitCode::internal_error;
  }
}

}  // namespace cvn::cli
