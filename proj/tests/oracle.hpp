#pragma once

// Test-only reference implementations. Deliberately naive so they share no
// code paths with the library.

#include <algorithm>
#include <cstdlib>
#include <random>
#include <vector>

#include "cvn/word.hpp"

namespace oracle {

/// Repeatedly scans for an adjacent cancelling pair until none remains.
inline std::vector<int> naive_reduce(std::vector<int> xs) {
  for (bool again = true; again;) {
    again = false;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
      if (xs[i] == -xs[i + 1]) {
        xs.erase(xs.begin() + static_cast<std::ptrdiff_t>(i), xs.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        again = true;
        break;
      }
  }
  return xs;
}

inline std::vector<int> naive_cyclic_core(std::vector<int> xs) {
  xs = naive_reduce(xs);
  while (xs.size() >= 2 && xs.front() == -xs.back()) {
    xs.erase(xs.begin());
    xs.pop_back();
  }
  return xs;
}

inline std::vector<std::vector<int>> rotations(const std::vector<int>& xs) {
  std::vector<std::vector<int>> out;
  for (std::size_t r = 0; r < std::max<std::size_t>(xs.size(), 1); ++r) {
    std::vector<int> y(xs.begin() + static_cast<std::ptrdiff_t>(r), xs.end());
    y.insert(y.end(), xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(r));
    out.push_back(y);
  }
  return out;
}

inline std::vector<int> random_letters(std::mt19937_64& rng, int rank, std::size_t len) {
  std::uniform_int_distribution<int> pick(1, rank);
  std::bernoulli_distribution sign(0.5);
  std::vector<int> xs;
  for (std::size_t i = 0; i < len; ++i) xs.push_back(sign(rng) ? pick(rng) : -pick(rng));
  return xs;
}

inline cvn::Word random_word(std::mt19937_64& rng, int rank, std::size_t len) {
  return cvn::free_reduce(random_letters(rng, rank, len), rank);
}

/// Random reduced word of exactly `len` letters.
inline cvn::Word random_reduced_word(std::mt19937_64& rng, int rank, std::size_t len) {
  std::uniform_int_distribution<int> pick(1, rank);
  std::bernoulli_distribution sign(0.5);
  std::vector<int> xs;
  while (xs.size() < len) {
    int x = sign(rng) ? pick(rng) : -pick(rng);
    if (!xs.empty() && xs.back() == -x) continue;
    xs.push_back(x);
  }
  return cvn::free_reduce(xs, rank);
}

/// Every cyclically reduced word of length 1..max_len, by brute force.
inline std::vector<cvn::Word> all_cyclically_reduced(int rank, int max_len) {
  std::vector<cvn::Word> out;
  std::vector<std::vector<int>> layer{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& w : layer)
      for (int g = -rank; g <= rank; ++g) {
        if (g == 0 || (!w.empty() && w.back() == -g)) continue;
        auto y = w;
        y.push_back(g);
        next.push_back(y);
      }
    for (const auto& w : next)
      if (w.size() < 2 || w.front() != -w.back()) out.push_back(cvn::free_reduce(w, rank));
    layer = std::move(next);
  }
  return out;
}

/// Elementary Nielsen moves with their inverses, composed at random.
inline cvn::AutomorphismPair random_nielsen(std::mt19937_64& rng, int rank, int moves) {
  auto acc = cvn::AutomorphismPair::identity(rank);
  std::uniform_int_distribution<int> pick(1, rank);
  std::uniform_int_distribution<int> kind(0, 2);
  for (int m = 0; m < moves; ++m) {
    auto step = cvn::AutomorphismPair::identity(rank);
    int i = pick(rng);
    int j = pick(rng);
    auto gen = [&](int k) { return cvn::Word::generator(k, rank); };
    switch (kind(rng)) {
      case 0:  // a_i -> a_i^{-1}
        step.forward[i - 1] = gen(i).inverse();
        step.inverse[i - 1] = gen(i).inverse();
        break;
      case 1:  // a_i -> a_i a_j
        if (i == j) continue;
        step.forward[i - 1] = gen(i) * gen(j);
        step.inverse[i - 1] = gen(i) * gen(j).inverse();
        break;
      default:  // swap
        step.forward[i - 1] = gen(j);
        step.forward[j - 1] = gen(i);
        step.inverse = step.forward;
        break;
    }
    acc = step.compose(acc);
  }
  return acc;
}

}  // namespace oracle
