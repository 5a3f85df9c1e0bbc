#include <gtest/gtest.h>

#include <random>

#include "cvn/fixtures.hpp"
#include "cvn/graph.hpp"
#include "oracle.hpp"
#include "random_graphs.hpp"
#include "work_graph.hpp"

using cvn::EdgePath;
using cvn::MarkedMetricGraph;
using cvn::Rational;
using cvn::Word;
using cvn::forward_of;
using cvn::reversed;
namespace fx = cvn::fixtures;

namespace {

Word w2(std::vector<int> xs) { return cvn::free_reduce(xs, 2); }
constexpr int a = 1;
constexpr int b = 2;

// In the theta fixtures edges 0,1,2 are A,B,C (resp. E,F,G).
constexpr cvn::OrientedEdge A = 0, B = 2, C = 4;

bool same_cyclic_loop(const EdgePath& p, const EdgePath& q) {
  auto rots = oracle::rotations(p);
  return std::find(rots.begin(), rots.end(), q) != rots.end();
}

}  // namespace

TEST(Validate, Roses) {
  EXPECT_TRUE(cvn::validate_marked_graph(fx::rose2(1, 1)));
  auto bad = fx::rose2(1, 1).with_labels({w2({a}), w2({a})});
  auto r = cvn::validate_marked_graph(bad);
  EXPECT_FALSE(r);
  EXPECT_EQ(r.offending, 2);
}

TEST(Validate, Fixtures) {
  EXPECT_TRUE(cvn::validate_marked_graph(fx::wc_x()));
  EXPECT_TRUE(cvn::validate_marked_graph(fx::wc_y()));
  EXPECT_TRUE(cvn::validate_marked_graph(fx::barbell(1, 1, 1)));
  for (int k = 0; k < 4; ++k) EXPECT_TRUE(cvn::validate_marked_graph(fx::polygrowth_target(k)));
}

TEST(Validate, RejectsStructuralDefects) {
  EXPECT_FALSE(cvn::validate_marked_graph(fx::rose2(1, 0)));
  auto g = fx::theta(1, 1, 1);
  EXPECT_FALSE(cvn::validate_marked_graph(g.with_marking(0, {{forward_of(0)}, {forward_of(2)}})));
}

TEST(Tighten, Examples) {
  auto g = fx::wc_x();
  EXPECT_EQ(cvn::tighten(g, {A, reversed(A), B}, cvn::TightenMode::path), EdgePath{B});
  EXPECT_TRUE(cvn::tighten(g, {A, reversed(B), B, reversed(A)}, cvn::TightenMode::loop).empty());
  EXPECT_THROW(cvn::tighten(g, {A, A}, cvn::TightenMode::path), cvn::InvalidInput);
}

TEST(Tighten, RemovesInsertedBacktracks) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = testing_support::random_rank2(rng);
    EdgePath p = cvn::tighten(g, testing_support::random_walk_loop(rng, g, 10),
                              cvn::TightenMode::path);
    EdgePath noisy = p;
    for (int k = 0; k < 4; ++k) {
      std::uniform_int_distribution<std::size_t> pos(0, noisy.size());
      std::size_t at = pos(rng);
      cvn::Vertex v = at < noisy.size() ? g.origin(noisy[at])
                      : noisy.empty()   ? g.basepoint()
                                        : g.terminus(noisy.back());
      auto st = g.star(v);
      auto s = st[static_cast<std::size_t>(trial + k) % st.size()];
      noisy.insert(noisy.begin() + static_cast<std::ptrdiff_t>(at), {s, reversed(s)});
    }
    EXPECT_EQ(cvn::tighten(g, noisy, cvn::TightenMode::path), p);
  }
}

TEST(TranslationLength, ThetaPairTable) {
  auto x = fx::wc_x();
  auto y = fx::wc_y();
  EXPECT_EQ(cvn::translation_length(x, w2({a})), Rational(1, 2));
  EXPECT_EQ(cvn::translation_length(x, Word(2)), 0);
  // Loop EFGF of Y.
  EdgePath efgf{A, reversed(B), C, reversed(B)};
  Word w = cvn::word_of_loop(y, efgf);
  EXPECT_EQ(cvn::translation_length(y, w), Rational(4, 3));
  EXPECT_EQ(cvn::loop_length(x, {A, reversed(C)}), Rational(2, 3));
  EXPECT_EQ(cvn::counting_inner_product(x, {A, reversed(C)}), Rational(2, 3));
}

TEST(TranslationLength, LoopWordsAgainstRose) {
  auto x = fx::wc_x();
  Rational alpha(5, 8);
  auto t = fx::wc_t(alpha);
  EXPECT_EQ(cvn::translation_length(t, cvn::word_of_loop(x, {A, reversed(B)})), alpha);
  EXPECT_EQ(cvn::translation_length(t, cvn::word_of_loop(x, {B, reversed(C)})), 1 - alpha);
  EXPECT_EQ(cvn::translation_length(t, cvn::word_of_loop(x, {A, reversed(C)})), 1);
}

TEST(TranslationLength, ClassFunctionAndPowers) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 60; ++trial) {
    auto g = testing_support::random_rank2(rng);
    Word w = oracle::random_word(rng, 2, 8);
    Word u = oracle::random_word(rng, 2, 6);
    EXPECT_EQ(cvn::translation_length(g, w), cvn::translation_length(g, u * w * u.inverse()));
    Word w3 = w * w * w;
    EXPECT_EQ(cvn::translation_length(g, w3), 3 * cvn::translation_length(g, w));
    if (!w.empty()) EXPECT_GT(cvn::translation_length(g, w), 0);
  }
}

TEST(LoopLength, TwoRoutesAgree) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = testing_support::random_rank2(rng);
    EdgePath loop = cvn::tighten(g, testing_support::random_walk_loop(rng, g, 9),
                                 cvn::TightenMode::loop);
    if (loop.empty()) continue;
    Word w = cvn::word_of_loop(g, loop);
    EXPECT_EQ(cvn::loop_length(g, loop), cvn::translation_length(g, w));
    EXPECT_EQ(cvn::loop_length(g, loop), cvn::counting_inner_product(g, loop));
    EXPECT_TRUE(same_cyclic_loop(loop, cvn::loop_of_word(g, w)));
  }
}

TEST(LoopLength, RejectsNonReduced) {
  auto x = fx::wc_x();
  EXPECT_THROW(cvn::loop_length(x, {A, reversed(A)}), cvn::InvalidInput);
}

TEST(Volume, Normalization) {
  EXPECT_EQ(cvn::volume(fx::wc_x()), 1);
  for (int k = 1; k < 5; ++k) {
    auto n = cvn::normalize_volume(fx::polygrowth_source(k));
    EXPECT_EQ(n.scale, Rational(1, 2 * k + 2));
    EXPECT_EQ(cvn::volume(n.graph), 1);
    EXPECT_EQ(cvn::normalize_volume(n.graph).graph, n.graph);
  }
  std::mt19937_64 rng(24);
  auto g = testing_support::random_rank2(rng);
  auto n = cvn::normalize_volume(g);
  Word w = oracle::random_word(rng, 2, 7);
  EXPECT_EQ(cvn::translation_length(n.graph, w), cvn::translation_length(g, w) / cvn::volume(g));
}

TEST(Simplex, Interpolation) {
  auto p = fx::barbell(1, 1, 1);
  auto q = fx::barbell(2, 1, Rational(1, 2));
  auto m = cvn::interpolate_in_simplex(p, q, Rational(1, 2));
  EXPECT_EQ(m.edge(0).length, Rational(3, 2));
  EXPECT_EQ(m.edge(1).length, 1);
  EXPECT_EQ(m.edge(2).length, Rational(3, 4));
  EXPECT_EQ(cvn::interpolate_in_simplex(p, q, 0), p);
  EXPECT_EQ(cvn::interpolate_in_simplex(p, q, 1), q);
  EXPECT_THROW(cvn::interpolate_in_simplex(p, fx::rose2(1, 1), 0), cvn::InvalidInput);
}

TEST(Automorphism, ChangesMarking) {
  auto r = fx::rose2(1, 1);
  EXPECT_EQ(cvn::apply_automorphism_to_marking(r, cvn::AutomorphismPair::identity(2)), r);
  auto s = cvn::apply_automorphism_to_marking(r, fx::polynomial_phi());
  EXPECT_EQ(s.marking()[1], (EdgePath{forward_of(1), forward_of(0)}));
  EXPECT_TRUE(cvn::validate_marked_graph(s));
}

TEST(Automorphism, LengthIdentityAndInverse) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testing_support::random_rank2(rng, 0);
    auto phi = oracle::random_nielsen(rng, 2, 5);
    auto h = cvn::apply_automorphism_to_marking(g, phi);
    auto back = cvn::apply_automorphism_to_marking(h, phi.inverted());
    for (int k = 0; k < 50; ++k) {
      Word w = oracle::random_word(rng, 2, 8);
      EXPECT_EQ(cvn::translation_length(h, w), cvn::translation_length(g, phi.apply(w)));
      EXPECT_EQ(cvn::translation_length(back, w), cvn::translation_length(g, w));
    }
  }
}

TEST(DeriveLabels, RoseIsIdentity) {
  auto r = fx::rose2(1, 2);
  auto labels = cvn::derive_inverse_marking(r);
  EXPECT_EQ(labels, (std::vector<Word>{w2({a}), w2({b})}));
}

TEST(DeriveLabels, ThetaAndTwisted) {
  auto x = fx::wc_x();
  EXPECT_TRUE(cvn::validate_marked_graph(cvn::with_derived_labels(x)));
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = testing_support::random_rank2(rng, 6);
    auto d = cvn::with_derived_labels(g);
    EXPECT_TRUE(cvn::validate_marked_graph(d));
    for (int k = 0; k < 10; ++k) {
      Word w = oracle::random_word(rng, 2, 8);
      EXPECT_EQ(cvn::translation_length(d, w), cvn::translation_length(g, w));
    }
  }
}

TEST(DeriveLabels, RejectsNonIsomorphisms) {
  auto r = fx::rose2(1, 1);
  EXPECT_THROW(cvn::derive_inverse_marking(r.with_marking(0, {{0}, {0}})), cvn::InvalidInput);
  EXPECT_THROW(cvn::derive_inverse_marking(r.with_marking(0, {{0}, {0, 0}})), cvn::InvalidInput);
  EXPECT_THROW(cvn::derive_inverse_marking(r.with_marking(0, {{0, 2}, {2, 0}})), cvn::InvalidInput);
}

TEST(Canonicalize, SubdividedRose) {
  auto r = fx::rose2(1, 2);
  cvn::detail::WorkGraph wg(r);
  wg.subdivide(0, Rational(1, 3));
  wg.subdivide(1, Rational(1, 2));
  auto sub = wg.finish().graph;
  EXPECT_EQ(sub.vertex_count(), 3);
  EXPECT_TRUE(cvn::validate_marked_graph(sub));
  auto c = cvn::canonicalize(sub);
  EXPECT_EQ(c.vertex_count(), 1);
  EXPECT_TRUE(cvn::validate_marked_graph(c));
  EXPECT_EQ(cvn::canonicalize(c), c);
}

TEST(Canonicalize, PreservesLengths) {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = testing_support::random_rank2(rng);
    cvn::detail::WorkGraph wg(g);
    for (int k = 0; k < 3; ++k) {
      std::uniform_int_distribution<int> pick(0, static_cast<int>(wg.edges().size()) - 1);
      int e = pick(rng);
      wg.subdivide(e, wg.edges()[static_cast<std::size_t>(e)].length / 3);
    }
    if (trial % 2) wg.rebase_along(wg.star(wg.base()).front());
    auto sub = wg.finish().graph;
    ASSERT_TRUE(cvn::validate_marked_graph(sub)) << cvn::validate_marked_graph(sub).message;
    auto c = cvn::canonicalize(sub);
    ASSERT_TRUE(cvn::validate_marked_graph(c));
    for (cvn::Vertex v = 0; v < c.vertex_count(); ++v) EXPECT_GE(c.valence(v), 3);
    EXPECT_EQ(cvn::volume(c), cvn::volume(g));
    for (int k = 0; k < 50; ++k) {
      Word w = oracle::random_word(rng, 2, 8);
      EXPECT_EQ(cvn::translation_length(c, w), cvn::translation_length(g, w));
    }
  }
}
