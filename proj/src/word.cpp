#include "cvn/word.hpp"

#include <cstdlib>
#include <string>

namespace cvn {

Word Word::reduce(std::span<const Letter> letters, int rank) {
  Word w(rank);
  auto& out = w.letters_;
  out.reserve(letters.size());
  for (Letter x : letters) {
    if (x == 0 || std::abs(x) > rank)
      throw InvalidInput("letter " + std::to_string(x) + " out of range for rank " +
                         std::to_string(rank));
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return w;
}

Word free_reduce(std::span<const Letter> letters, int rank) { return Word::reduce(letters, rank); }

Word Word::generator(int index, int rank) {
  Letter x = index;
  return free_reduce(std::span<const Letter>(&x, 1), rank);
}

Word Word::inverse() const {
  Word w(rank_);
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(-*it);
  return w;
}

Word operator*(const Word& u, const Word& v) {
  if (u.rank() != v.rank()) throw RankMismatch("word product across ranks");
  Word w = u;
  for (Letter x : v.letters_) {
    if (!w.letters_.empty() && w.letters_.back() == -x)
      w.letters_.pop_back();
    else
      w.letters_.push_back(x);
  }
  return w;
}

CyclicReduction cyclic_reduce(const Word& w) {
  const auto& xs = w.letters();
  std::size_t i = 0;
  std::size_t j = xs.size();
  while (j - i >= 2 && xs[i] == -xs[j - 1]) {
    ++i;
    --j;
  }
  CyclicReduction r{Word(w.rank()), Word(w.rank())};
  r.core = free_reduce(std::span<const Letter>(xs.data() + i, j - i), w.rank());
  r.conjugator = free_reduce(std::span<const Letter>(xs.data(), i), w.rank());
  return r;
}

std::size_t cyclic_length(const Word& w) { return cyclic_reduce(w).core.size(); }

Word apply_endomorphism(const Word& w, std::span<const Word> images) {
  if (static_cast<int>(images.size()) != w.rank())
    throw RankMismatch("endomorphism has " + std::to_string(images.size()) +
                       " images for rank " + std::to_string(w.rank()));
  const int target_rank = images.empty() ? w.rank() : images.front().rank();
  Word out(target_rank);
  for (Letter x : w.letters()) {
    const Word& img = images[static_cast<std::size_t>(std::abs(x) - 1)];
    out = out * (x > 0 ? img : img.inverse());
  }
  return out;
}

AutomorphismPair AutomorphismPair::identity(int rank) {
  AutomorphismPair p{rank, {}, {}};
  for (int i = 1; i <= rank; ++i) {
    p.forward.push_back(Word::generator(i, rank));
    p.inverse.push_back(Word::generator(i, rank));
  }
  return p;
}

AutomorphismPair AutomorphismPair::compose(const AutomorphismPair& other) const {
  if (rank != other.rank) throw RankMismatch("composing automorphisms of different rank");
  AutomorphismPair p{rank, {}, {}};
  for (const Word& w : other.forward) p.forward.push_back(apply_endomorphism(w, forward));
  // (this ∘ other)^{-1} = other^{-1} ∘ this^{-1}
  for (const Word& w : inverse) p.inverse.push_back(apply_endomorphism(w, other.inverse));
  return p;
}

AutomorphismPair AutomorphismPair::power(int k) const {
  AutomorphismPair base = k >= 0 ? *this : inverted();
  AutomorphismPair acc = identity(rank);
  for (int i = 0; i < std::abs(k); ++i) acc = base.compose(acc);
  return acc;
}

ValidationReport validate_automorphism_pair(const AutomorphismPair& phi) {
  if (phi.rank <= 0) return ValidationReport::reject("rank must be positive");
  if (static_cast<int>(phi.forward.size()) != phi.rank ||
      static_cast<int>(phi.inverse.size()) != phi.rank)
    return ValidationReport::reject("expected one image per generator");
  for (const auto* images : {&phi.forward, &phi.inverse})
    for (const Word& w : *images)
      if (w.rank() != phi.rank) return ValidationReport::reject("image has wrong rank");
  for (int i = 1; i <= phi.rank; ++i) {
    const Word a = Word::generator(i, phi.rank);
    if (apply_endomorphism(apply_endomorphism(a, phi.forward), phi.inverse) != a)
      return ValidationReport::reject("inverse(forward(a_" + std::to_string(i) + ")) != a_" +
                                          std::to_string(i),
                                      i);
    if (apply_endomorphism(apply_endomorphism(a, phi.inverse), phi.forward) != a)
      return ValidationReport::reject("forward(inverse(a_" + std::to_string(i) + ")) != a_" +
                                          std::to_string(i),
                                      i);
  }
  return ValidationReport::accept();
}

}  // namespace cvn
