#include "apent/freegroup.hpp"

#include <algorithm>
#include <unordered_set>

namespace apent::freegroup {

namespace {

void check_letter(int rank, int letter) {
  if (letter == 0 || letter > rank || letter < -rank) {
    throw InvalidLetterError("letter " + std::to_string(letter) +
                             " outside ±{1.." + std::to_string(rank) + "}");
  }
}

// Dense index of a signed letter: s_i -> 2(i-1), s_i^{-1} -> 2(i-1)+1.
int encode(int letter) {
  return letter > 0 ? 2 * (letter - 1) : 2 * (-letter - 1) + 1;
}

void check_same_rank(const Word& a, const Word& b) {
  if (a.rank() != b.rank()) {
    throw RankMismatchError("words of rank " + std::to_string(a.rank()) +
                            " and " + std::to_string(b.rank()));
  }
}

// Rank-independent total order on letter sequences used only for lookup
// structures (not the length-lex order, which depends on a LetterOrder).
bool raw_less(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

Word::Word(int rank) : rank_(rank) {
  if (rank < 1) throw InvalidLetterError("rank must be positive");
}

Word::Word(int rank, std::span<const int> letters) : rank_(rank) {
  if (rank < 1) throw InvalidLetterError("rank must be positive");
  letters_.reserve(letters.size());
  for (int letter : letters) {
    check_letter(rank, letter);
    if (!letters_.empty() && letters_.back() == -letter) {
      letters_.pop_back();
    } else {
      letters_.push_back(letter);
    }
  }
}

Word reduce(int rank, std::span<const int> letters) {
  return Word(rank, letters);
}

Word multiply(const Word& a, const Word& b) {
  check_same_rank(a, b);
  std::vector<int> joined = a.letters();
  joined.insert(joined.end(), b.letters().begin(), b.letters().end());
  return Word(a.rank(), joined);
}

Word inverse(const Word& a) {
  std::vector<int> rev(a.letters().rbegin(), a.letters().rend());
  for (int& letter : rev) letter = -letter;
  return Word(a.rank(), rev);
}

Word parent(const Word& g) {
  if (g.is_identity()) {
    throw InvalidLetterError("the identity has no parent");
  }
  std::span<const int> rest(g.letters().data() + 1, g.letters().size() - 1);
  return Word(g.rank(), rest);
}

std::size_t WordHash::operator()(const Word& w) const {
  std::size_t h = std::hash<int>()(w.rank());
  for (int letter : w.letters()) {
    h ^= std::hash<int>()(letter) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

LetterOrder::LetterOrder(int rank, std::vector<int> sequence)
    : rank_(rank), sequence_(std::move(sequence)) {
  position_.assign(2 * rank_, -1);
  for (int i = 0; i < 2 * rank_; ++i) {
    int slot = encode(sequence_[i]);
    if (position_[slot] != -1) {
      throw InvalidLetterError("duplicate letter in letter order");
    }
    position_[slot] = i;
  }
}

LetterOrder LetterOrder::standard(int rank) {
  if (rank < 1) throw InvalidLetterError("rank must be positive");
  std::vector<int> seq;
  seq.reserve(2 * rank);
  for (int i = 1; i <= rank; ++i) {
    seq.push_back(i);
    seq.push_back(-i);
  }
  return LetterOrder(rank, std::move(seq));
}

LetterOrder LetterOrder::from_sequence(int rank, std::span<const int> letters) {
  if (rank < 1) throw InvalidLetterError("rank must be positive");
  if (static_cast<int>(letters.size()) != 2 * rank) {
    throw InvalidLetterError("letter order must list all 2r signed letters");
  }
  for (int letter : letters) check_letter(rank, letter);
  return LetterOrder(rank, std::vector<int>(letters.begin(), letters.end()));
}

LetterOrder LetterOrder::reversed() const {
  std::vector<int> seq(sequence_.rbegin(), sequence_.rend());
  return LetterOrder(rank_, std::move(seq));
}

int LetterOrder::position(int letter) const {
  check_letter(rank_, letter);
  return position_[encode(letter)];
}

bool LetterOrder::word_less(const Word& a, const Word& b) const {
  if (a.length() != b.length()) return a.length() < b.length();
  for (int i = 0; i < a.length(); ++i) {
    int pa = position(a.letters()[i]);
    int pb = position(b.letters()[i]);
    if (pa != pb) return pa < pb;
  }
  return false;
}

GroundedSet::GroundedSet(int rank, std::vector<Word> elements)
    : rank_(rank), elements_(std::move(elements)) {
  if (elements_.empty()) {
    throw NotGroundedError("a grounded set contains the identity");
  }
  for (const Word& w : elements_) {
    if (w.rank() != rank_) {
      throw RankMismatchError("element rank differs from set rank");
    }
  }
  sorted_.resize(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    sorted_[i] = static_cast<int>(i);
  }
  std::sort(sorted_.begin(), sorted_.end(), [this](int a, int b) {
    return raw_less(elements_[a].letters(), elements_[b].letters());
  });
  for (std::size_t i = 1; i < sorted_.size(); ++i) {
    if (elements_[sorted_[i - 1]] == elements_[sorted_[i]]) {
      throw NotGroundedError("duplicate element " +
                             to_string(elements_[sorted_[i]]));
    }
  }
  if (index_of(Word(rank_)) < 0) {
    throw NotGroundedError("a grounded set contains the identity");
  }
  // Connectedness in the left Cayley graph, which is a tree rooted at e with
  // parent = drop-leftmost-letter: equivalent to closure under parent.
  for (const Word& w : elements_) {
    if (!w.is_identity() && index_of(parent(w)) < 0) {
      throw NotGroundedError("set is not connected at " + to_string(w));
    }
  }
}

int GroundedSet::index_of(const Word& w) const {
  auto it = std::lower_bound(
      sorted_.begin(), sorted_.end(), w, [this](int idx, const Word& target) {
        return raw_less(elements_[idx].letters(), target.letters());
      });
  if (it == sorted_.end() || !(elements_[*it] == w)) return -1;
  return *it;
}

namespace {

void extend_sphere(const LetterOrder& order, std::vector<int>* prefix,
                   int target, std::vector<Word>* out) {
  if (static_cast<int>(prefix->size()) == target) {
    out->push_back(Word(order.rank(), *prefix));
    return;
  }
  for (int letter : order.sequence()) {
    if (!prefix->empty() && prefix->back() == -letter) continue;
    prefix->push_back(letter);
    extend_sphere(order, prefix, target, out);
    prefix->pop_back();
  }
}

}  // namespace

std::vector<Word> sphere(int rank, int radius, const LetterOrder& order) {
  if (order.rank() != rank) {
    throw RankMismatchError("letter order rank differs from requested rank");
  }
  std::vector<Word> out;
  std::vector<int> prefix;
  extend_sphere(order, &prefix, radius, &out);
  return out;
}

GroundedSet ball(int rank, int radius, const LetterOrder& order) {
  std::vector<Word> elements;
  for (int n = 0; n <= radius; ++n) {
    std::vector<Word> shell = sphere(rank, n, order);
    elements.insert(elements.end(), shell.begin(), shell.end());
  }
  return GroundedSet(rank, std::move(elements));
}

int enlargement_direction(const GroundedSet& F, const Word& g) {
  if (g.rank() != F.rank()) {
    throw RankMismatchError("word rank differs from set rank");
  }
  if (F.contains(g)) {
    throw NotAnEnlargementError(to_string(g) + " is already in the set");
  }
  int found = 0;
  for (int i = 1; i <= F.rank(); ++i) {
    for (int s : {i, -i}) {
      std::vector<int> shifted;
      shifted.reserve(g.length() + 1);
      shifted.push_back(-s);
      shifted.insert(shifted.end(), g.letters().begin(), g.letters().end());
      if (F.contains(Word(g.rank(), shifted))) {
        if (found != 0) {
          throw ConsistencyError("two enlargement directions for " +
                                 to_string(g));
        }
        found = s;
      }
    }
  }
  if (found == 0) {
    throw NotAnEnlargementError(to_string(g) + " is not adjacent to the set");
  }
  return found;
}

std::vector<Word> shift_overlap(const GroundedSet& F, int s) {
  std::vector<int> overlap;
  shift_overlap_indices(F, s, &overlap, nullptr);
  std::vector<Word> out;
  out.reserve(overlap.size());
  for (int idx : overlap) out.push_back(F.elements()[idx]);
  return out;
}

void shift_overlap_indices(const GroundedSet& F, int s,
                           std::vector<int>* overlap, std::vector<int>* rest) {
  check_letter(F.rank(), s);
  for (int i = 0; i < F.size(); ++i) {
    const Word& w = F.elements()[i];
    std::vector<int> shifted;
    shifted.reserve(w.length() + 1);
    shifted.push_back(-s);
    shifted.insert(shifted.end(), w.letters().begin(), w.letters().end());
    bool in_shift = F.contains(Word(F.rank(), shifted));
    if (in_shift && overlap) overlap->push_back(i);
    if (!in_shift && rest) rest->push_back(i);
  }
}

std::vector<Word> predecessors(const Word& g, const LetterOrder& order) {
  if (order.rank() != g.rank()) {
    throw RankMismatchError("letter order rank differs from word rank");
  }
  std::vector<Word> out;
  for (int n = 0; n < g.length(); ++n) {
    std::vector<Word> shell = sphere(g.rank(), n, order);
    out.insert(out.end(), shell.begin(), shell.end());
  }
  for (const Word& w : sphere(g.rank(), g.length(), order)) {
    if (order.word_less(w, g)) out.push_back(w);
  }
  return out;
}

std::vector<Word> q_set(const Word& g, const LetterOrder& order) {
  Word g_inv = inverse(g);
  std::vector<Word> out;
  for (const Word& p : predecessors(g, order)) {
    out.push_back(multiply(g_inv, p));
  }
  std::sort(out.begin(), out.end(), [&order](const Word& a, const Word& b) {
    return order.word_less(a, b);
  });
  return out;
}

std::vector<Word> crescent(const Word& g, const LetterOrder& order) {
  if (g.is_identity()) {
    throw InvalidLetterError("the identity has no crescent");
  }
  std::vector<Word> full = q_set(g, order);
  if (g.length() == 1) return full;
  std::vector<Word> prior = q_set(parent(g), order);
  std::vector<Word> out;
  std::set_difference(full.begin(), full.end(), prior.begin(), prior.end(),
                      std::back_inserter(out),
                      [&order](const Word& a, const Word& b) {
                        return order.word_less(a, b);
                      });
  return out;
}

Enumeration::Enumeration(LetterOrder order, std::vector<Word> words, Kind kind)
    : order_(std::move(order)), words_(std::move(words)), kind_(kind) {}

Enumeration Enumeration::length_lex(int rank, const LetterOrder& order,
                                    int count) {
  if (order.rank() != rank) {
    throw RankMismatchError("letter order rank differs from requested rank");
  }
  if (count < 1) throw InvalidLetterError("enumeration needs at least e");
  std::vector<Word> words;
  for (int n = 0; static_cast<int>(words.size()) < count; ++n) {
    std::vector<Word> shell = sphere(rank, n, order);
    words.insert(words.end(), shell.begin(), shell.end());
  }
  words.resize(count, Word(rank));
  return Enumeration(order, std::move(words), Kind::LengthLex);
}

Enumeration Enumeration::from_words(const LetterOrder& order,
                                    std::vector<Word> words) {
  if (words.empty() || !words.front().is_identity()) {
    throw NotGroundedError("an enumeration starts at the identity");
  }
  for (std::size_t n = 1; n < words.size(); ++n) {
    GroundedSet prefix(order.rank(),
                       std::vector<Word>(words.begin(), words.begin() + n));
    enlargement_direction(prefix, words[n]);  // throws if not an enlargement
  }
  return Enumeration(order, std::move(words), Kind::Grounded);
}

GroundedSet Enumeration::prefix(int n) const {
  if (n < 1 || n > size()) {
    throw InvalidLetterError("prefix length out of range");
  }
  return GroundedSet(rank(),
                     std::vector<Word>(words_.begin(), words_.begin() + n));
}

Enumeration::Step Enumeration::step(int n) const {
  if (n < 0 || n + 1 >= size()) {
    throw InvalidLetterError("step index out of range");
  }
  GroundedSet F = prefix(n + 1);
  Step out{words_[n + 1], enlargement_direction(F, words_[n + 1]), {}, {}};
  shift_overlap_indices(F, out.direction, &out.overlap, &out.rest);
  return out;
}

std::string to_string(const Word& w) {
  if (w.is_identity()) return "e";
  std::string out;
  for (int letter : w.letters()) {
    int idx = letter > 0 ? letter : -letter;
    if (idx <= 26) {
      out += static_cast<char>('a' + idx - 1);
    } else {
      out += "s" + std::to_string(idx);
    }
    if (letter < 0) out += "^-1";
  }
  return out;
}

}  // namespace apent::freegroup
