#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "cvn/fixtures.hpp"
#include "cvn/stretch.hpp"
#include "oracle.hpp"
#include "random_graphs.hpp"

using cvn::CandidateLoop;
using cvn::EdgePath;
using cvn::LoopShape;
using cvn::Rational;
using cvn::Word;
namespace fx = cvn::fixtures;

namespace {

Word w2(std::vector<int> xs) { return cvn::free_reduce(xs, 2); }
constexpr int a = 1;
constexpr int b = 2;

int count_shape(const std::vector<CandidateLoop>& cs, LoopShape s) {
  return static_cast<int>(std::count_if(cs.begin(), cs.end(), [&](auto& c) { return c.shape == s; }));
}

/// Max and min of l_B(w)/l_A(w) over every cyclically reduced word up to len.
std::pair<Rational, Rational> word_ratio_range(const cvn::MarkedMetricGraph& x,
                                               const cvn::MarkedMetricGraph& y, int len) {
  static const auto words = oracle::all_cyclically_reduced(2, 8);
  Rational hi = 0;
  Rational lo = -1;
  for (const auto& w : words) {
    if (static_cast<int>(w.size()) > len) continue;
    Rational r = cvn::translation_length(y, w) / cvn::translation_length(x, w);
    if (r > hi) hi = r;
    if (lo < 0 || r < lo) lo = r;
  }
  return {hi, lo};
}

}  // namespace

TEST(Candidates, RoseThetaBarbell) {
  auto rose = cvn::enumerate_candidates(fx::rose2(1, 1));
  ASSERT_EQ(rose.size(), 4u);
  EXPECT_EQ(count_shape(rose, LoopShape::circle), 2);
  EXPECT_EQ(count_shape(rose, LoopShape::figure_eight), 2);

  auto theta = cvn::enumerate_candidates(fx::wc_x());
  EXPECT_EQ(theta.size(), 3u);
  EXPECT_EQ(count_shape(theta, LoopShape::circle), 3);

  auto bar = cvn::enumerate_candidates(fx::barbell(1, 1, 1));
  EXPECT_EQ(count_shape(bar, LoopShape::circle), 2);
  EXPECT_EQ(count_shape(bar, LoopShape::dumbbell), 2);
  EXPECT_EQ(bar.size(), 4u);
}

TEST(Candidates, AreCyclicallyReducedAndUnique) {
  std::vector<Rational> petals{1, 1, 1};
  auto rose3 = cvn::make_rose(petals);
  auto cs = cvn::enumerate_candidates(rose3);
  EXPECT_EQ(cs.size(), 3u + 3u * 2u);
  std::set<EdgePath> keys;
  for (auto& c : cs) {
    EXPECT_TRUE(cvn::is_cyclically_reduced_loop(rose3, c.loop));
    EXPECT_EQ(cvn::canonical_rotation(c.loop), c.loop);
    keys.insert(c.loop);
  }
  EXPECT_EQ(keys.size(), cs.size());
}

TEST(LambdaR, ThetaPair) {
  auto x = fx::wc_x();
  auto y = fx::wc_y();
  auto r = cvn::lambda_r(x, y);
  EXPECT_EQ(r.value, 2);
  // AC: edges 0 and 2.
  EXPECT_EQ(r.witness.loop, cvn::canonical_rotation({0, 5}));
  auto t = cvn::lambda_r(fx::wc_t(Rational(5, 8)), y);
  EXPECT_EQ(t.value, Rational(4, 3));
  // a, b and ab^-1 all tie at alpha = 5/8.
  EXPECT_EQ(t.attained.size(), 3u);
  auto ti = cvn::lambda_r(fx::wc_t(Rational(1, 2)), y);
  EXPECT_EQ(ti.value, Rational(5, 3));
  EXPECT_EQ(ti.attained.size(), 1u);
  EXPECT_EQ(cvn::lambda_r(x, x).value, 1);
}

TEST(LambdaR, RankMismatch) {
  std::vector<Rational> petals{1, 1, 1};
  EXPECT_THROW(cvn::lambda_r(fx::rose2(1, 1), cvn::make_rose(petals)), cvn::RankMismatch);
}

TEST(LambdaR, ParallelMatchesSerial) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    auto x = testing_support::random_rank2(rng);
    auto y = testing_support::random_rank2(rng);
    auto cs = cvn::enumerate_candidates(x);
    EXPECT_EQ(cvn::candidate_ratios(x, cs, y), cvn::candidate_ratios_serial(x, cs, y));
  }
}

TEST(LambdaR, ExhaustiveWordOracle) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 15; ++trial) {
    auto x = testing_support::random_rank2(rng, trial % 2);
    auto y = trial % 3 ? testing_support::perturb(rng, x) : testing_support::random_rank2(rng, 0);
    auto [hi, lo] = word_ratio_range(x, y, 8);
    EXPECT_EQ(cvn::lambda_r(x, y).value, hi);
    EXPECT_EQ(cvn::lambda_r(y, x).value, 1 / lo);
  }
}

TEST(Report, ThetaPairDistance) {
  auto rep = cvn::stretch_report(fx::wc_x(), fx::wc_y());
  EXPECT_EQ(rep.lambda_r, 2);
  EXPECT_EQ(rep.lambda_l, 2);
  EXPECT_EQ(rep.lambda, 4);
  EXPECT_DOUBLE_EQ(rep.d, std::log(4.0));
}

TEST(Report, IdentityAndScaling) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = testing_support::random_rank2(rng);
    auto same = cvn::stretch_report(x, x);
    EXPECT_EQ(same.lambda, 1);
    EXPECT_EQ(same.d, 0);
    auto scaled = cvn::stretch_report(x, x.scaled(3));
    EXPECT_EQ(scaled.lambda, 1);
    EXPECT_EQ(scaled.lambda_r_normalized, 1);
    EXPECT_EQ(scaled.d_r, 0);
    auto y = testing_support::random_rank2(rng);
    auto r1 = cvn::stretch_report(x, y);
    auto r2 = cvn::stretch_report(x.scaled(Rational(2, 7)), y.scaled(5));
    EXPECT_EQ(r1.lambda, r2.lambda);
    EXPECT_EQ(r1.lambda_r_normalized, r2.lambda_r_normalized);
    auto rev = cvn::stretch_report(y, x);
    EXPECT_EQ(r1.lambda_r, rev.lambda_l);
    EXPECT_EQ(r1.lambda_l, rev.lambda_r);
  }
}

TEST(Metric, TriangleInequalities) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 30; ++trial) {
    auto x = testing_support::random_rank2(rng);
    auto y = testing_support::random_rank2(rng);
    auto z = testing_support::random_rank2(rng);
    EXPECT_LE(cvn::lambda_r_normalized(x, z),
              cvn::lambda_r_normalized(x, y) * cvn::lambda_r_normalized(y, z));
    EXPECT_GE(cvn::lambda_r_normalized(x, y), 1);
  }
}

TEST(BoundedCancellation, IdentityHasNone) {
  auto r = fx::rose2(1, 1);
  auto f = cvn::initial_pl_map(r, r);
  cvn::CancellationOptions opt;
  opt.length_cap = 4;
  auto bc = cvn::bounded_cancellation_bound(f, opt);
  EXPECT_EQ(bc.k, 0);
  EXPECT_EQ(bc.bound, 2);
  EXPECT_FALSE(bc.truncated);
}

TEST(BoundedCancellation, ShearHasCancellation) {
  auto r = fx::rose2(1, 1);
  cvn::AutomorphismPair psi{2, {w2({a}), w2({a, b})}, {w2({a}), w2({-a, b})}};
  auto target = cvn::apply_automorphism_to_marking(r, psi);
  auto f = cvn::initial_pl_map(r, target);
  ASSERT_TRUE(cvn::validate_pl_map(f));
  cvn::CancellationOptions opt;
  opt.length_cap = 4;
  auto par = cvn::bounded_cancellation_bound(f, opt);
  opt.parallel = false;
  auto ser = cvn::bounded_cancellation_bound(f, opt);
  EXPECT_GE(par.k, 1);
  EXPECT_GE(par.bound, 1 + cvn::volume(r));
  EXPECT_EQ(par.k, ser.k);
  EXPECT_EQ(par.pairs, ser.pairs);
  EXPECT_EQ(par.alpha, ser.alpha);
}

TEST(BoundedCancellation, PairCapReportsLowerBound) {
  auto r = fx::rose2(1, 1);
  cvn::AutomorphismPair psi{2, {w2({a}), w2({a, b})}, {w2({a}), w2({-a, b})}};
  auto f = cvn::initial_pl_map(r, cvn::apply_automorphism_to_marking(r, psi));
  cvn::CancellationOptions opt;
  opt.length_cap = 5;
  opt.max_pairs = 50;
  auto bc = cvn::bounded_cancellation_bound(f, opt);
  EXPECT_TRUE(bc.truncated);
  EXPECT_LE(bc.pairs, 50u);
}

TEST(BoundedCancellation, RandomPairsBeyondCapRespectBound) {
  auto r = fx::rose2(1, 1);
  cvn::AutomorphismPair psi{2, {w2({a}), w2({a, b})}, {w2({a}), w2({-a, b})}};
  auto target = cvn::apply_automorphism_to_marking(r, psi);
  auto f = cvn::initial_pl_map(r, target);
  cvn::CancellationOptions opt;
  opt.length_cap = 6;
  auto bc = cvn::bounded_cancellation_bound(f, opt);
  std::mt19937_64 rng(35);
  int tested = 0;
  while (tested < 200) {
    Word u = oracle::random_reduced_word(rng, 2, 7 + tested % 6);
    Word v = oracle::random_reduced_word(rng, 2, 7 + tested % 5);
    if (u.letters().back() == -v.letters().front() || v.letters().back() == -u.letters().front())
      continue;
    ++tested;
    auto pu = cvn::loop_of_word(r, u);  // the rose: word paths are the loops themselves
    auto pv = cvn::loop_of_word(r, v);
    EdgePath puv = pu;
    puv.insert(puv.end(), pv.begin(), pv.end());
    auto lu = cvn::path_length(cvn::push_path(f, pu));
    auto lv = cvn::path_length(cvn::push_path(f, pv));
    auto luv = cvn::path_length(cvn::push_path(f, puv));
    EXPECT_GE(luv, lu + lv - 2 * bc.bound);
  }
}
