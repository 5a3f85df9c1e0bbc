#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cvn/fixtures.hpp"
#include "cvn/folding.hpp"
#include "cvn/geodesics.hpp"
#include "oracle.hpp"
#include "random_graphs.hpp"

using cvn::FoldingPath;
using cvn::MarkedMetricGraph;
using cvn::Rational;
using cvn::Word;
namespace fx = cvn::fixtures;

namespace {

/// Event times plus the midpoint of every interval.
std::vector<Rational> event_and_mid_times(const FoldingPath& p) {
  std::vector<Rational> ts;
  for (std::size_t i = 0; i < p.times.size(); ++i) {
    ts.push_back(p.times[i]);
    if (i + 1 < p.times.size()) ts.push_back((p.times[i] + p.times[i + 1]) / 2);
  }
  return ts;
}

std::vector<MarkedMetricGraph> samples_at(const FoldingPath& p, const std::vector<Rational>& ts) {
  std::vector<MarkedMetricGraph> out;
  for (const auto& t : ts) out.push_back(cvn::sample_path(p, t).graph);
  return out;
}

bool isometric(const MarkedMetricGraph& x, const MarkedMetricGraph& y) {
  return cvn::lambda_r(x, y).value == 1 && cvn::lambda_r(y, x).value == 1;
}

FoldingPath polygrowth_path(int k) {
  return cvn::fast_fold(
      cvn::prepare_folding_setup(fx::polygrowth_source(k), fx::polygrowth_target(k)));
}

}  // namespace

TEST(Setup, IdentityHasNoEvents) {
  auto x = fx::wc_x();
  auto setup = cvn::prepare_folding_setup(x, x);
  EXPECT_TRUE(isometric(setup.source, setup.target));
  auto path = cvn::fast_fold(setup);
  EXPECT_EQ(path.event_count(), 0u);
  EXPECT_EQ(path.end_time(), 0);
}

TEST(Setup, IsometricOnEdgesAndUnitStretch) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    auto x = testing_support::random_rank2(rng);
    auto y = testing_support::random_rank2(rng);
    auto s = cvn::prepare_folding_setup(x, y);
    ASSERT_TRUE(cvn::validate_marked_graph(s.source));
    ASSERT_TRUE(cvn::validate_pl_map(s.map));
    EXPECT_EQ(cvn::volume(s.target), 1);
    for (cvn::EdgeId e = 0; e < s.source.edge_count(); ++e) EXPECT_EQ(s.map.edge_stretch(e), 1);
    auto lr = cvn::lambda_r(s.source, s.target);
    EXPECT_EQ(lr.value, 1);
    // The original witness keeps its target length.
    EXPECT_EQ(cvn::translation_length(s.source, s.witness_word),
              cvn::translation_length(s.target, s.witness_word));
  }
}

TEST(Setup, PolygrowthStartingRose) {
  for (int k : {2, 3, 5}) {
    auto s = cvn::prepare_folding_setup(fx::polygrowth_source(k), fx::polygrowth_target(k));
    auto rose = cvn::canonicalize(s.source);
    ASSERT_EQ(rose.vertex_count(), 1);
    std::vector<Rational> lens;
    for (const auto& d : rose.edges()) lens.push_back(d.length);
    std::sort(lens.begin(), lens.end());
    // Petals 1 and k+1 against a target of volume 2; ours has volume 1.
    EXPECT_EQ(lens, (std::vector<Rational>{Rational(1, 2), (Rational(k + 1) / 2)}));
  }
}

TEST(FastFold, PolygrowthEvents) {
  for (int k : {2, 3, 5}) {
    auto p = polygrowth_path(k);
    ASSERT_EQ(p.event_count(), static_cast<std::size_t>(k));
    for (int i = 0; i <= k; ++i) {
      EXPECT_EQ(p.times[static_cast<std::size_t>(i)], (Rational(i) / 2));
      auto rose = cvn::canonicalize(p.snapshots[static_cast<std::size_t>(i)]);
      std::vector<Rational> lens;
      for (const auto& d : rose.edges()) lens.push_back(d.length);
      std::sort(lens.begin(), lens.end());
      std::vector<Rational> want{Rational(1, 2), (Rational(k + 1 - i) / 2)};
      std::sort(want.begin(), want.end());
      EXPECT_EQ(lens, want) << "k=" << k << " i=" << i;
    }
    EXPECT_TRUE(isometric(p.snapshots.back(), p.setup.target));
  }
}

TEST(FastFold, PolygrowthIntermediateGraph) {
  const int k = 3;
  auto p = polygrowth_path(k);
  for (int i = 0; i < k; ++i)
    for (Rational d : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
      auto s = cvn::sample_path(p, (i + d) / 2);
      auto g = cvn::canonicalize(s.graph);
      ASSERT_EQ(g.vertex_count(), 2);
      ASSERT_EQ(g.edge_count(), 3);
      std::vector<Rational> lens;
      for (const auto& e : g.edges()) lens.push_back(e.length);
      std::sort(lens.begin(), lens.end());
      std::vector<Rational> want{(1 - d) / 2, (k + 1 - i - d) / 2, d / 2};
      std::sort(want.begin(), want.end());
      EXPECT_EQ(lens, want);
    }
}

TEST(FastFold, PolygrowthSpeedRatio) {
  for (int k : {2, 3, 5}) {
    auto p = polygrowth_path(k);
    for (int i = 0; i < k; ++i)
      for (Rational d : {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
        auto sp = cvn::speeds(p, (i + d) / 2);
        Rational want = (k + 2 - i - 2 * d) / (2 * k + 1 - 2 * i - 2 * d);
        EXPECT_EQ(sp.ratio, want) << "k=" << k << " i=" << i << " d=" << cvn::to_string(d);
        EXPECT_GE(sp.ratio, Rational(1, 2));
        // Volume-one scale: lengths halve, speeds double.
        EXPECT_EQ(sp.local, 4 / (k + 2 - i - 2 * d));
      }
  }
}

TEST(FastFold, PolygrowthFoldedLoopCrossesOnce) {
  const int k = 3;
  auto p = polygrowth_path(k);
  for (int i = 0; i < k; ++i) {
    auto s = cvn::sample_path(p, (i + Rational(1, 2)) / 2);
    auto sp = cvn::speeds(s);
    EXPECT_EQ(cvn::multiplicity(s.map, sp.local_loop), 1);
    EXPECT_EQ(cvn::multiplicity(s.map, p.setup.witness_word), 0);
  }
}

TEST(FastFold, QuasiGeodesicPieces) {
  for (int k : {2, 3, 5}) {
    auto p = polygrowth_path(k);
    std::vector<MarkedMetricGraph> fold;
    for (int i = 0; i < k; ++i)
      for (Rational d : {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4)})
        fold.push_back(cvn::sample_path(p, (i + d) / 2).graph);
    fold.push_back(p.snapshots.back());
    EXPECT_TRUE(cvn::check_quasi_geodesic(fold, 2, 0).ok);

    std::vector<MarkedMetricGraph> shrink;
    for (int j = 0; j <= 4; ++j)
      shrink.push_back(fx::rose2(Rational(k + 1) - Rational(k * j) / 4, k + 1));
    EXPECT_TRUE(cvn::check_quasi_geodesic(shrink, 2, 0).ok);

    std::vector<MarkedMetricGraph> all = shrink;
    all.insert(all.end(), fold.begin() + 1, fold.end());
    EXPECT_TRUE(cvn::check_quasi_geodesic(all, 4, 0).ok);
  }
}

TEST(FastFold, RandomPairsAreRightGeodesics) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 15; ++trial) {
    auto x = testing_support::random_rank2(rng);
    auto y = testing_support::random_rank2(rng);
    auto p = cvn::fast_fold(cvn::prepare_folding_setup(x, y));
    ASSERT_TRUE(isometric(p.snapshots.back(), p.setup.target));
    for (std::size_t i = 0; i < p.snapshots.size(); ++i) {
      ASSERT_TRUE(cvn::validate_marked_graph(p.snapshots[i]));
      ASSERT_TRUE(cvn::validate_pl_map(p.maps[i]));
      EXPECT_EQ(cvn::translation_length(p.snapshots[i], p.setup.witness_word),
                cvn::translation_length(p.setup.source, p.setup.witness_word));
      if (i + 1 < p.snapshots.size())
        EXPECT_GE(cvn::volume(p.snapshots[i]) - cvn::volume(p.snapshots[i + 1]),
                  p.times[i + 1] - p.times[i]);
    }
    auto ts = event_and_mid_times(p);
    if (ts.size() < 3) continue;
    auto pts = samples_at(p, ts);
    EXPECT_TRUE(cvn::check_dr_geodesic(pts).ok);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) EXPECT_EQ(cvn::lambda_r(pts[i], pts[j]).value, 1);
    if (pts.size() >= 4) {
      auto fp = cvn::check_four_point(pts.size(), [&](std::size_t i, std::size_t j) {
        return cvn::exp_distance(pts[i], pts[j], cvn::PathMetric::symmetric);
      });
      EXPECT_TRUE(fp.ok);
    }
  }
}

TEST(FastFold, SingleVertexStrategyReachesTarget) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = testing_support::random_rank2(rng);
    auto y = testing_support::random_rank2(rng);
    auto setup = cvn::prepare_folding_setup(x, y);
    auto p = cvn::fast_fold(setup, cvn::FoldStrategy::single_vertex);
    EXPECT_TRUE(isometric(p.snapshots.back(), setup.target));
    auto ts = event_and_mid_times(p);
    if (ts.size() >= 3) EXPECT_TRUE(cvn::check_dr_geodesic(samples_at(p, ts)).ok);
  }
}

TEST(FastFold, SnapshotsHaveNoValenceOneVertices) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    auto x = testing_support::random_rank2(rng, 6);
    auto y = testing_support::random_rank2(rng, 6);
    auto p = cvn::fast_fold(cvn::prepare_folding_setup(x, y));
    for (std::size_t i = 0; i + 1 < p.times.size(); ++i) {
      const Rational mid = (p.times[i] + p.times[i + 1]) / 2;
      for (const auto& g : {p.snapshots[i], cvn::sample_path(p, mid).graph}) {
        std::vector<int> valence(static_cast<std::size_t>(g.vertex_count()), 0);
        for (cvn::EdgeId e = 0; e < g.edge_count(); ++e) {
          ++valence[static_cast<std::size_t>(g.edge(e).from)];
          ++valence[static_cast<std::size_t>(g.edge(e).to)];
        }
        for (int v : valence) EXPECT_GE(v, 2) << "trial " << trial;
      }
    }
  }
}

// Toward speed over local speed stays above systole / (2M), M = 3n - 3.
TEST(Speeds, ThickPartRatioBound) {
  std::mt19937_64 rng(77);
  const Rational bound_factor = Rational(1) / (2 * 3);
  for (int trial = 0; trial < 30; ++trial) {
    auto x = testing_support::random_rank2(rng, 6);
    auto y = testing_support::random_rank2(rng, 6);
    auto p = cvn::fast_fold(cvn::prepare_folding_setup(x, y));
    for (std::size_t i = 0; i + 1 < p.times.size(); ++i) {
      for (int j = 0; j < 4; ++j) {
        const Rational t = p.times[i] + (p.times[i + 1] - p.times[i]) * j / 4;
        auto s = cvn::sample_path(p, t);
        auto sys = cvn::systole_and_thin_test(s.graph, 0).value;
        auto sp = cvn::speeds(s);
        EXPECT_GT(sp.local, 0);
        EXPECT_GE(sp.ratio, sys * bound_factor) << "trial " << trial << " t " << t;
        EXPECT_LE(sp.ratio, 1);
      }
    }
  }
}

TEST(Multiplicity, MonotoneAndPositiveTowardTarget) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = testing_support::random_rank2(rng);
    auto y = testing_support::random_rank2(rng);
    auto p = cvn::fast_fold(cvn::prepare_folding_setup(x, y));
    if (p.event_count() == 0) continue;
    std::vector<Word> words;
    for (int k = 0; k < 8; ++k) words.push_back(oracle::random_reduced_word(rng, 2, 2 + k % 5));
    std::vector<int> last(words.size(), 1 << 30);
    for (const auto& t : event_and_mid_times(p)) {
      auto s = cvn::sample_path(p, t);
      for (std::size_t w = 0; w < words.size(); ++w) {
        if (cvn::cyclic_length(words[w]) == 0) continue;
        int mu = cvn::multiplicity(s.map, words[w]);
        EXPECT_LE(mu, last[w]);
        last[w] = mu;
      }
      if (t < p.end_time()) {
        auto sp = cvn::speeds(s);
        EXPECT_GE(cvn::multiplicity(s.map, sp.toward_word), 1);
        EXPECT_GT(sp.local, 0);
        EXPECT_GT(sp.toward, 0);
        EXPECT_EQ(cvn::multiplicity(s.map, p.setup.witness_word), 0);
      }
    }
  }
}

TEST(Speeds, FiniteDifferencesApproachLocalSpeed) {
  auto p = polygrowth_path(3);
  const Rational t(1, 8);
  auto sp = cvn::speeds(p, t);
  auto at = cvn::sample_path(p, t).graph;
  double prev = 1e300;
  for (Rational h : {Rational(1, 100), Rational(1, 1000), Rational(1, 10000)}) {
    auto next = cvn::sample_path(p, t + h).graph;
    double q = cvn::log_of(cvn::exp_distance(at, next, cvn::PathMetric::symmetric)) / h.get_d();
    double err = std::abs(q - sp.local.get_d());
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Systole, RosesAndThinSequence) {
  auto s = cvn::systole_and_thin_test(fx::rose2(Rational(1, 2), Rational(1, 2)), Rational(1, 10));
  EXPECT_EQ(s.value, Rational(1, 2));
  EXPECT_FALSE(s.thin);
  Rational prev = 1;
  for (int k = 1; k <= 10; ++k) {
    auto t = cvn::systole_and_thin_test(fx::thin_rose(3, k), Rational(1, 20));
    EXPECT_LT(t.value, prev);
    prev = t.value;
  }
  EXPECT_TRUE(cvn::systole_and_thin_test(fx::thin_rose(3, 10), Rational(1, 20)).thin);
}

TEST(Systole, AttainedByACircle) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testing_support::random_rank2(rng);
    auto s = cvn::systole_and_thin_test(g, 0);
    for (const auto& c : cvn::enumerate_candidates(g))
      EXPECT_GE(cvn::loop_length(g, c.loop) / cvn::volume(g), s.value);
  }
}

TEST(FourPoint, SquareRootMetricAndDoublingBack) {
  std::vector<Rational> ts;
  for (int i = 0; i <= 10; ++i) ts.push_back((Rational(i) / 10));
  auto ok = cvn::check_four_point(ts.size(), [&](std::size_t i, std::size_t j) {
    return std::sqrt(Rational(ts[j] - ts[i]).get_d());
  });
  EXPECT_TRUE(ok.ok);
  // A -> B -> A: the middle pair is farther apart than the endpoints.
  std::vector<MarkedMetricGraph> pts{fx::wc_x(), fx::wc_t(Rational(1, 2)), fx::wc_y(),
                                     fx::wc_t(Rational(1, 2)), fx::wc_x()};
  auto bad = cvn::check_four_point(pts.size(), [&](std::size_t i, std::size_t j) {
    return cvn::exp_distance(pts[i], pts[j], cvn::PathMetric::symmetric);
  });
  EXPECT_FALSE(bad.ok);
}

TEST(RightGeodesic, ThetaPairCrossing) {
  auto x = fx::wc_x();
  auto y = fx::wc_y();
  EXPECT_FALSE(cvn::check_dr_geodesic({x, fx::wc_t(Rational(1, 2)), y}).ok);
  EXPECT_TRUE(cvn::check_dr_geodesic({x, fx::wc_t(Rational(5, 8)), y}).ok);
}

TEST(RightGeodesic, SimplexSegments) {
  std::mt19937_64 rng(56);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = testing_support::random_rank2(rng);
    auto b = testing_support::perturb(rng, a);
    std::vector<MarkedMetricGraph> pts;
    for (int i = 0; i <= 4; ++i) pts.push_back(cvn::interpolate_in_simplex(a, b, (Rational(i) / 4)));
    EXPECT_TRUE(cvn::check_dr_geodesic(pts).ok);
  }
}

TEST(QuasiGeodesic, GeodesicUnderRightMetric) {
  auto p = polygrowth_path(3);
  auto pts = samples_at(p, event_and_mid_times(p));
  EXPECT_TRUE(cvn::check_quasi_geodesic(pts, 1, 0, cvn::PathMetric::right).ok);
  std::vector<MarkedMetricGraph> back{fx::wc_x(), fx::wc_y(), fx::wc_x()};
  EXPECT_FALSE(cvn::check_quasi_geodesic(back, 2, 0).ok);
}
