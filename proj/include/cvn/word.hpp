#pragma once

#include <compare>
#include <span>
#include <vector>

#include "cvn/errors.hpp"

namespace cvn {

/// Signed generator index: +i is a_i, -i is a_i^{-1}, with 1 <= i <= rank.
using Letter = int;

/// A freely reduced word in the free group of rank `rank`.
class Word {
 public:
  explicit Word(int rank = 0) : rank_(rank) {}

  /// Freely reduces `letters`. Throws InvalidInput if an index is out of range.
  static Word reduce(std::span<const Letter> letters, int rank);
  static Word generator(int index, int rank);

  int rank() const noexcept { return rank_; }
  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  bool is_cyclically_reduced() const noexcept {
    return letters_.size() < 2 || letters_.front() != -letters_.back();
  }

  Word inverse() const;

  /// Product followed by free reduction.
  friend Word operator*(const Word& u, const Word& v);

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  int rank_;
  std::vector<Letter> letters_;
};

/// Stack-based free reduction of a raw letter sequence.
Word free_reduce(std::span<const Letter> letters, int rank);

struct CyclicReduction {
  Word core;
  Word conjugator;  // w = conjugator * core * conjugator^{-1}
};

CyclicReduction cyclic_reduce(const Word& w);

/// Length of the cyclically reduced core; a class function.
std::size_t cyclic_length(const Word& w);

/// Substitutes images[i-1] for a_i (inverted for negative letters).
/// Throws RankMismatch when images.size() != w.rank().
Word apply_endomorphism(const Word& w, std::span<const Word> images);

/// An automorphism given together with its inverse. Inverses are supplied
/// by the caller and checked by validate_automorphism_pair.
struct AutomorphismPair {
  int rank = 0;
  std::vector<Word> forward;
  std::vector<Word> inverse;

  static AutomorphismPair identity(int rank);
  AutomorphismPair inverted() const { return {rank, inverse, forward}; }
  /// (this ∘ other)(w) = this(other(w)).
  AutomorphismPair compose(const AutomorphismPair& other) const;
  /// this^k for any integer k.
  AutomorphismPair power(int k) const;
  Word apply(const Word& w) const { return apply_endomorphism(w, forward); }
};

ValidationReport validate_automorphism_pair(const AutomorphismPair& phi);

}  // namespace cvn
