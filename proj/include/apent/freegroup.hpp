#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "apent/errors.hpp"

namespace apent::freegroup {

// A reduced word in the free group of a given rank.  Letters are signed
// generator indices: +i is the i-th generator, -i its inverse.  letters()[0]
// is the leftmost letter of the word as written, so the neighbour of a word
// one step closer to the identity in the left Cayley graph is obtained by
// dropping letters()[0].
class Word {
 public:
  // The identity word.
  explicit Word(int rank);
  // Reduces an arbitrary letter sequence.  Throws InvalidLetterError if a
  // letter is 0 or exceeds the rank in magnitude.
  Word(int rank, std::span<const int> letters);

  int rank() const { return rank_; }
  int length() const { return static_cast<int>(letters_.size()); }
  bool is_identity() const { return letters_.empty(); }
  const std::vector<int>& letters() const { return letters_; }

  friend bool operator==(const Word& a, const Word& b) {
    return a.rank_ == b.rank_ && a.letters_ == b.letters_;
  }

 private:
  int rank_;
  std::vector<int> letters_;
};

// Canonicalizes a letter sequence into a reduced word.
Word reduce(int rank, std::span<const int> letters);

Word multiply(const Word& a, const Word& b);
Word inverse(const Word& a);

// The word with the leftmost letter removed (the neighbour one step closer to
// the identity in the left Cayley graph).  Throws on the identity.
Word parent(const Word& g);

// Deterministic hash usable for unordered containers keyed by words.
struct WordHash {
  std::size_t operator()(const Word& w) const;
};

// A total order on the 2r signed letters, extended to the length-lexicographic
// order on words: shorter words first; words of equal length are compared at
// the first (leftmost) position where they differ.
class LetterOrder {
 public:
  // s_1 < s_1^{-1} < s_2 < s_2^{-1} < ...
  static LetterOrder standard(int rank);
  // An explicit permutation of the 2r signed letters, smallest first.
  static LetterOrder from_sequence(int rank, std::span<const int> letters);

  // The same letters in the opposite order.
  LetterOrder reversed() const;

  int rank() const { return rank_; }
  const std::vector<int>& sequence() const { return sequence_; }
  int position(int letter) const;
  bool letter_less(int a, int b) const { return position(a) < position(b); }
  bool word_less(const Word& a, const Word& b) const;

 private:
  LetterOrder(int rank, std::vector<int> sequence);
  int rank_ = 0;
  std::vector<int> sequence_;  // letters, smallest first
  std::vector<int> position_;  // indexed by encoded letter
};

// A finite set of words that contains the identity and is connected in the
// left Cayley graph (equivalently: closed under dropping the leftmost
// letter).  Element order is preserved as given; balls and enumeration
// prefixes are in length-lexicographic order by construction.
class GroundedSet {
 public:
  GroundedSet(int rank, std::vector<Word> elements);

  int rank() const { return rank_; }
  int size() const { return static_cast<int>(elements_.size()); }
  const std::vector<Word>& elements() const { return elements_; }
  bool contains(const Word& w) const { return index_of(w) >= 0; }
  // Position of w in element order, or -1.
  int index_of(const Word& w) const;

 private:
  int rank_;
  std::vector<Word> elements_;
  std::vector<int> sorted_;  // element indices sorted for lookup
};

// All reduced words of the given length, sorted lexicographically from the
// leftmost letter under `order`.
std::vector<Word> sphere(int rank, int radius, const LetterOrder& order);

// The closed ball B_n in length-lexicographic order.
GroundedSet ball(int rank, int radius, const LetterOrder& order);

// The unique signed letter s with g in s·F, for g an exterior boundary point
// of F.  Throws NotAnEnlargementError if g lies in F or is not adjacent to F.
int enlargement_direction(const GroundedSet& F, const Word& g);

// F ∩ sF, in F's element order.
std::vector<Word> shift_overlap(const GroundedSet& F, int s);

// Indices into F's element order of F ∩ sF and of F \ sF.
void shift_overlap_indices(const GroundedSet& F, int s,
                           std::vector<int>* overlap, std::vector<int>* rest);

// P(g): all words strictly before g in the length-lexicographic order, sorted.
std::vector<Word> predecessors(const Word& g, const LetterOrder& order);

// Q(g) = g^{-1} P(g), sorted length-lexicographically.
std::vector<Word> q_set(const Word& g, const LetterOrder& order);

// C(g) = Q(g) \ Q(parent(g)), sorted length-lexicographically.  Throws on the
// identity.
std::vector<Word> crescent(const Word& g, const LetterOrder& order);

// An enumeration g_0 = e, g_1, g_2, ... of group elements in which every
// prefix {g_0,...,g_n} is grounded, so each step is an enlargement.
class Enumeration {
 public:
  enum class Kind { Grounded, LengthLex };

  // The first `count` words of the group in length-lexicographic order.
  static Enumeration length_lex(int rank, const LetterOrder& order, int count);
  // An explicit enumeration; validates that every prefix is grounded.
  static Enumeration from_words(const LetterOrder& order,
                                std::vector<Word> words);

  int rank() const { return order_.rank(); }
  Kind kind() const { return kind_; }
  const LetterOrder& letter_order() const { return order_; }
  const std::vector<Word>& words() const { return words_; }
  int size() const { return static_cast<int>(words_.size()); }

  // The grounded set {g_0,...,g_{n-1}} in enumeration order (n >= 1).
  GroundedSet prefix(int n) const;

  // Description of the enlargement F_n -> F_n ∪ {g_{n+1}} where
  // F_n = {g_0,...,g_n}: the added word, its direction s, and the positions in
  // F_n of F_n ∩ sF_n and F_n \ sF_n.
  struct Step {
    Word g;
    int direction;
    std::vector<int> overlap;
    std::vector<int> rest;
  };
  Step step(int n) const;

 private:
  Enumeration(LetterOrder order, std::vector<Word> words, Kind kind);
  LetterOrder order_;
  std::vector<Word> words_;
  Kind kind_;
};

// Render as a compact string like "a b^-1 a" (a, b, c, ... for generators);
// "e" for the identity.  Used in diagnostics and reports.
std::string to_string(const Word& w);

}  // namespace apent::freegroup
