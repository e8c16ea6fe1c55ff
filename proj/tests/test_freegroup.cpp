#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "apent/freegroup.hpp"

using namespace apent::freegroup;

namespace {

// Independent word generator for cross-checking the library: builds each
// sphere by appending letters on the RIGHT of the previous sphere (the
// library recurses from the leftmost letter), then sorts with its own
// comparator.
std::vector<std::vector<Word>> oracle_spheres(int rank,
                                              const LetterOrder& order,
                                              int max_radius) {
  std::vector<std::vector<Word>> levels;
  levels.push_back({Word(rank)});
  for (int n = 1; n <= max_radius; ++n) {
    std::vector<Word> next;
    for (const Word& w : levels.back()) {
      for (int i = 1; i <= rank; ++i) {
        for (int t : {i, -i}) {
          if (!w.letters().empty() && w.letters().back() == -t) continue;
          std::vector<int> letters = w.letters();
          letters.push_back(t);
          next.push_back(Word(rank, letters));
        }
      }
    }
    std::sort(next.begin(), next.end(), [&order](const Word& a, const Word& b) {
      const auto& la = a.letters();
      const auto& lb = b.letters();
      for (std::size_t i = 0; i < la.size(); ++i) {
        if (la[i] != lb[i]) return order.position(la[i]) < order.position(lb[i]);
      }
      return false;
    });
    levels.push_back(std::move(next));
  }
  return levels;
}

std::vector<Word> oracle_ball(int rank, const LetterOrder& order, int radius) {
  std::vector<Word> out;
  for (const auto& level : oracle_spheres(rank, order, radius)) {
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

Word w(int rank, std::initializer_list<int> letters) {
  return Word(rank, std::vector<int>(letters));
}

// Explicit construction of the three slices of a crescent from their
// closed-form description: every member extends the written inverse of g,
// with length-dependent side conditions.
std::vector<Word> oracle_crescent(const Word& g, const LetterOrder& order) {
  const int n = g.length();
  const int rank = g.rank();
  const Word g_inv = inverse(g);
  const int s_n = g.letters().front();
  std::vector<Word> out;
  auto with_suffix = [&](const Word& u) {
    return multiply(g_inv, u);
  };
  for (int len : {2 * n - 2, 2 * n - 1, 2 * n}) {
    if (len < n) continue;
    if (len == 2 * n - 2) {
      // Present only when the previous letter of g precedes the inverse of
      // its leading letter.
      if (n < 2) continue;
      if (!order.letter_less(g.letters()[1], -s_n)) continue;
    }
    for (const Word& u : oracle_ball(rank, order, len - n)) {
      if (u.length() != len - n) continue;
      if (!u.is_identity() && u.letters().front() == s_n) continue;  // unreduced
      if (len == 2 * n && !(u.length() > 0 &&
                            order.letter_less(u.letters().front(), s_n))) {
        continue;
      }
      Word candidate = with_suffix(u);
      if (candidate.length() == len) out.push_back(candidate);
    }
  }
  std::sort(out.begin(), out.end(), [&order](const Word& a, const Word& b) {
    return order.word_less(a, b);
  });
  return out;
}

// Closed-form owner of a word under the crescent partition: the crescent
// containing t_m…t_1 is C(g) for g the inverse of a leading segment whose
// length depends on the parity of m and one letter comparison.
Word oracle_crescent_owner(const Word& word, const LetterOrder& order) {
  const auto& t = word.letters();
  const int m = word.length();
  const int p = (m + 1) / 2;
  int take = p;
  if (m % 2 == 0) {
    // t_p sits at index p, t_{p+1} at index p-1 (index 0 is leftmost t_m).
    if (order.letter_less(-t[p - 1], t[p])) take = p + 1;
  }
  std::vector<int> head(t.begin(), t.begin() + take);
  return inverse(Word(word.rank(), head));
}

}  // namespace

TEST_CASE("reduction cancels adjacent inverse pairs") {
  CHECK(w(2, {1, -1}).is_identity());
  CHECK(w(2, {1, 2, -2, 1}).letters() == std::vector<int>{1, 1});
  CHECK(w(2, {2, -1, 1, -2, 1}).letters() == std::vector<int>{1});
  CHECK(reduce(2, std::vector<int>{1, 2, -2, -1}).is_identity());
  // Reduction is idempotent: feeding back the letters changes nothing.
  Word a = w(3, {1, 2, -1, 3, -3, -2});
  CHECK(Word(3, a.letters()) == a);
}

TEST_CASE("invalid letters are rejected") {
  CHECK_THROWS_AS(w(2, {0}), apent::InvalidLetterError);
  CHECK_THROWS_AS(w(2, {3}), apent::InvalidLetterError);
  CHECK_THROWS_AS(w(2, {-3}), apent::InvalidLetterError);
  CHECK_THROWS_AS(multiply(w(2, {1}), w(3, {1})), apent::RankMismatchError);
}

TEST_CASE("multiply and inverse follow the group axioms") {
  CHECK(multiply(w(2, {1}), w(2, {-1})).is_identity());
  CHECK(inverse(w(2, {1, 2})).letters() == std::vector<int>{-2, -1});
  CHECK(multiply(w(3, {1, 2}), w(3, {-2, 3})).letters() ==
        std::vector<int>{1, 3});

  std::mt19937 gen(20240811);
  std::uniform_int_distribution<int> len(0, 8);
  std::uniform_int_distribution<int> letter_pick(0, 3);
  auto random_word = [&] {
    std::vector<int> letters;
    int target = len(gen);
    for (int i = 0; i < target; ++i) {
      static const int alphabet[4] = {1, -1, 2, -2};
      letters.push_back(alphabet[letter_pick(gen)]);
    }
    return Word(2, letters);
  };
  for (int trial = 0; trial < 1000; ++trial) {
    Word a = random_word(), b = random_word(), c = random_word();
    CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
    CHECK(multiply(a, inverse(a)).is_identity());
    CHECK(multiply(inverse(a), a).is_identity());
  }
}

TEST_CASE("parent drops the leftmost letter") {
  CHECK(parent(w(2, {2, 1})) == w(2, {1}));
  CHECK(parent(w(2, {1})).is_identity());
  CHECK_THROWS(parent(Word(2)));
}

TEST_CASE("balls have the advertised sizes and match the oracle") {
  // |B_n| = 1 + 2r((2r-1)^n - 1)/(2r-2) for r >= 2, and 2n+1 for r = 1.
  auto expected_size = [](int r, int n) {
    if (r == 1) return 2 * n + 1;
    long q = 1;
    for (int i = 0; i < n; ++i) q *= 2 * r - 1;
    return static_cast<int>(1 + 2L * r * (q - 1) / (2 * r - 2));
  };
  CHECK(ball(2, 1, LetterOrder::standard(2)).size() == 5);
  CHECK(ball(2, 2, LetterOrder::standard(2)).size() == 17);
  CHECK(ball(1, 3, LetterOrder::standard(1)).size() == 7);

  for (int r = 1; r <= 3; ++r) {
    LetterOrder order = LetterOrder::standard(r);
    std::vector<Word> expected = oracle_ball(r, order, 3);
    GroundedSet B = ball(r, 3, order);
    REQUIRE(B.size() == static_cast<int>(expected.size()));
    CHECK(B.size() == expected_size(r, 3));
    for (int i = 0; i < B.size(); ++i) CHECK(B.elements()[i] == expected[i]);
  }

  // A non-standard letter order reshuffles spheres but not their content.
  LetterOrder rev = LetterOrder::standard(2).reversed();
  std::vector<Word> std_sphere = sphere(2, 2, LetterOrder::standard(2));
  std::vector<Word> rev_sphere = sphere(2, 2, rev);
  CHECK(std_sphere.size() == rev_sphere.size());
  CHECK(std_sphere != rev_sphere);
  auto as_set = [](const std::vector<Word>& v) {
    std::set<std::vector<int>> s;
    for (const Word& x : v) s.insert(x.letters());
    return s;
  };
  CHECK(as_set(std_sphere) == as_set(rev_sphere));
}

TEST_CASE("grounded sets validate identity membership and connectivity") {
  CHECK_THROWS_AS(GroundedSet(2, {w(2, {1})}), apent::NotGroundedError);
  CHECK_THROWS_AS(GroundedSet(2, {Word(2), w(2, {1, 2})}),
                  apent::NotGroundedError);
  CHECK_THROWS_AS(GroundedSet(2, {Word(2), w(2, {1}), w(2, {1})}),
                  apent::NotGroundedError);
  GroundedSet F(2, {Word(2), w(2, {1}), w(2, {2, 1})});
  CHECK(F.contains(w(2, {2, 1})));
  CHECK(F.index_of(w(2, {1})) == 1);
  CHECK(F.index_of(w(2, {2})) == -1);
}

TEST_CASE("enlargement direction is the unique shift containing the new word") {
  GroundedSet just_e(2, {Word(2)});
  CHECK(enlargement_direction(just_e, w(2, {1})) == 1);

  GroundedSet F(2, {Word(2), w(2, {1})});
  CHECK(enlargement_direction(F, w(2, {2, 1})) == 2);
  CHECK_THROWS_AS(enlargement_direction(F, w(2, {1, 2})),
                  apent::NotAnEnlargementError);
  CHECK_THROWS_AS(enlargement_direction(F, w(2, {1})),
                  apent::NotAnEnlargementError);
}

TEST_CASE("shift overlap computes F ∩ sF") {
  GroundedSet just_e(2, {Word(2)});
  CHECK(shift_overlap(just_e, 1).empty());

  LetterOrder order = LetterOrder::standard(2);
  GroundedSet B1 = ball(2, 1, order);
  std::vector<Word> overlap = shift_overlap(B1, 1);
  REQUIRE(overlap.size() == 2);
  CHECK(overlap[0].is_identity());
  CHECK(overlap[1] == w(2, {1}));
}

TEST_CASE("ball shift overlaps equal the union of smaller balls") {
  // B_{n+1} ∩ sB_{n+1} = B_n ∪ sB_n, checked as exact set equality.
  for (int r = 1; r <= 3; ++r) {
    LetterOrder order = LetterOrder::standard(r);
    for (int n = 0; n <= 3; ++n) {
      GroundedSet big = ball(r, n + 1, order);
      GroundedSet small = ball(r, n, order);
      for (int i = 1; i <= r; ++i) {
        for (int s : {i, -i}) {
          std::set<std::vector<int>> lhs;
          for (const Word& x : shift_overlap(big, s)) lhs.insert(x.letters());
          std::set<std::vector<int>> rhs;
          Word shift(r, std::vector<int>{s});
          for (const Word& x : small.elements()) {
            rhs.insert(x.letters());
            rhs.insert(multiply(shift, x).letters());
          }
          CHECK(lhs == rhs);
        }
      }
    }
  }
}

TEST_CASE("ball overlap count identity") {
  // |B_n| - sum over positive generators of |B_n ∩ sB_n| = 1.
  for (int r = 1; r <= 3; ++r) {
    LetterOrder order = LetterOrder::standard(r);
    for (int n = 1; n <= 4; ++n) {
      GroundedSet B = ball(r, n, order);
      long total = B.size();
      for (int s = 1; s <= r; ++s) {
        total -= static_cast<long>(shift_overlap(B, s).size());
      }
      CHECK(total == 1);
    }
  }
}

TEST_CASE("predecessors and q-sets match the hand examples") {
  LetterOrder order = LetterOrder::standard(2);
  std::vector<Word> Pa = predecessors(w(2, {1}), order);
  REQUIRE(Pa.size() == 1);
  CHECK(Pa[0].is_identity());

  std::vector<Word> Qa = q_set(w(2, {1}), order);
  REQUIRE(Qa.size() == 1);
  CHECK(Qa[0] == w(2, {-1}));

  std::vector<Word> Qb = q_set(w(2, {2}), order);
  REQUIRE(Qb.size() == 3);
  CHECK(Qb[0] == w(2, {-2}));
  CHECK(Qb[1] == w(2, {-2, 1}));
  CHECK(Qb[2] == w(2, {-2, -1}));
}

TEST_CASE("q-sets are sandwiched between translated balls and nested") {
  for (int r = 1; r <= 3; ++r) {
    LetterOrder order = LetterOrder::standard(r);
    int depth = r == 3 ? 5 : 5;
    std::vector<Word> all = oracle_ball(r, order, depth);

    // Incremental oracle: predecessors of the i-th word are exactly the
    // first i words of the length-lex listing.
    std::map<std::vector<int>, std::vector<std::vector<int>>> q_cache;
    std::vector<Word> seen;
    std::mt19937 gen(7);
    for (const Word& g : all) {
      Word g_inv = inverse(g);
      std::vector<std::vector<int>> q;
      q.reserve(seen.size());
      for (const Word& p : seen) q.push_back(multiply(g_inv, p).letters());
      std::sort(q.begin(), q.end());
      seen.push_back(g);

      if (!g.is_identity()) {
        // e never belongs to Q(g), and g^{-1}B_{|g|-1} ⊆ Q(g) ⊆ g^{-1}B_{|g|}.
        CHECK(!std::binary_search(q.begin(), q.end(), std::vector<int>{}));
        for (const auto& letters : q) {
          CHECK(Word(r, letters).length() <= 2 * g.length());
        }
        std::size_t smaller_ball = oracle_ball(r, order, g.length() - 1).size();
        CHECK(q.size() >= smaller_ball);

        const auto& parent_q = q_cache.at(parent(g).letters());
        CHECK(std::includes(q.begin(), q.end(), parent_q.begin(),
                            parent_q.end()));
      }
      q_cache[g.letters()] = std::move(q);
    }

    // Spot-check the library q_set against the incremental oracle.
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (int trial = 0; trial < 40; ++trial) {
      const Word& g = all[pick(gen)];
      std::vector<std::vector<int>> lib;
      for (const Word& x : q_set(g, order)) lib.push_back(x.letters());
      std::sort(lib.begin(), lib.end());
      CHECK(lib == q_cache.at(g.letters()));
    }
  }
}

TEST_CASE("crescents match the hand examples and the slice descriptions") {
  LetterOrder order = LetterOrder::standard(2);
  std::vector<Word> Ca = crescent(w(2, {1}), order);
  REQUIRE(Ca.size() == 1);
  CHECK(Ca[0] == w(2, {-1}));

  std::vector<Word> Cb = crescent(w(2, {2}), order);
  REQUIRE(Cb.size() == 3);
  CHECK(Cb[0] == w(2, {-2}));
  CHECK(Cb[1] == w(2, {-2, 1}));
  CHECK(Cb[2] == w(2, {-2, -1}));

  CHECK_THROWS(crescent(Word(2), order));

  for (int r = 2; r <= 3; ++r) {
    for (const LetterOrder& o :
         {LetterOrder::standard(r), LetterOrder::standard(r).reversed()}) {
      for (const Word& g : oracle_ball(r, o, 3)) {
        if (g.is_identity()) continue;
        std::vector<Word> lib = crescent(g, o);
        std::vector<Word> expect = oracle_crescent(g, o);
        REQUIRE(lib.size() == expect.size());
        for (std::size_t i = 0; i < lib.size(); ++i) CHECK(lib[i] == expect[i]);
      }
    }
  }
}

TEST_CASE("crescents partition the ball of radius five") {
  for (int r = 2; r <= 3; ++r) {
    LetterOrder order = LetterOrder::standard(r);
    // Crescents of words of length n live in spheres 2n-2 .. 2n, so words in
    // B_5 are covered by crescents of B_3.
    std::map<std::vector<int>, std::vector<int>> owner;
    for (const Word& g : oracle_ball(r, order, 3)) {
      if (g.is_identity()) continue;
      for (const Word& member : crescent(g, order)) {
        if (member.length() > 5) continue;
        auto [it, inserted] = owner.emplace(member.letters(), g.letters());
        CHECK(inserted);  // pairwise disjoint
        (void)it;
      }
    }
    std::vector<Word> B5 = oracle_ball(r, order, 5);
    CHECK(owner.size() == B5.size() - 1);
    for (const Word& x : B5) {
      if (x.is_identity()) continue;
      auto it = owner.find(x.letters());
      REQUIRE(it != owner.end());
      // The owner agrees with the closed-form membership rule.
      CHECK(it->second == oracle_crescent_owner(x, order).letters());
    }
  }
}

TEST_CASE("length-lex enumeration prefixes are grounded") {
  for (int r = 1; r <= 3; ++r) {
    LetterOrder order = LetterOrder::standard(r);
    int count = ball(r, 4, order).size();
    Enumeration enumr = Enumeration::length_lex(r, order, count);
    CHECK(enumr.kind() == Enumeration::Kind::LengthLex);
    REQUIRE(enumr.size() == count);
    // Lengths are non-decreasing with lexicographic tie-break.
    for (int i = 1; i < count; ++i) {
      CHECK(order.word_less(enumr.words()[i - 1], enumr.words()[i]));
    }
    // GroundedSet validates connectivity on construction.
    for (int n = 1; n <= count; ++n) CHECK_NOTHROW(enumr.prefix(n));
  }
}

TEST_CASE("enumeration steps expose direction and overlap indices") {
  LetterOrder order = LetterOrder::standard(2);
  Enumeration enumr = Enumeration::length_lex(2, order, 17);
  for (int n = 0; n + 1 < enumr.size(); ++n) {
    Enumeration::Step step = enumr.step(n);
    CHECK(step.g == enumr.words()[n + 1]);
    // Along a length-lex enumeration the direction is the leading letter.
    CHECK(step.direction == step.g.letters().front());
    CHECK(static_cast<int>(step.overlap.size() + step.rest.size()) == n + 1);
    GroundedSet F = enumr.prefix(n + 1);
    for (int idx : step.overlap) {
      Word shifted = multiply(Word(2, std::vector<int>{-step.direction}),
                              F.elements()[idx]);
      CHECK(F.contains(shifted));
    }
  }
}

TEST_CASE("explicit enumerations are validated step by step") {
  LetterOrder order = LetterOrder::standard(2);
  std::vector<Word> good = {Word(2), w(2, {1}), w(2, {2, 1}), w(2, {2})};
  // {e, a} cannot be followed by ab: not adjacent.
  std::vector<Word> bad = {Word(2), w(2, {1}), w(2, {1, 2})};
  CHECK_NOTHROW(Enumeration::from_words(order, good));
  CHECK_THROWS_AS(Enumeration::from_words(order, bad),
                  apent::NotAnEnlargementError);
  CHECK_THROWS_AS(Enumeration::from_words(order, {w(2, {1})}),
                  apent::NotGroundedError);
}

TEST_CASE("shift overlaps follow the enlargement update rules") {
  // Adding g in direction s grows F ∩ sF by g, grows F ∩ s⁻¹F by s⁻¹g, and
  // leaves every other shift overlap unchanged.
  for (int r = 2; r <= 3; ++r) {
    LetterOrder order = LetterOrder::standard(r);
    int count = ball(r, 3, order).size();
    Enumeration enumr = Enumeration::length_lex(r, order, count);
    for (int n = 0; n + 1 < count; ++n) {
      GroundedSet F = enumr.prefix(n + 1);
      GroundedSet grown = enumr.prefix(n + 2);
      Word g = enumr.words()[n + 1];
      int s = enlargement_direction(F, g);
      for (int i = 1; i <= r; ++i) {
        for (int t : {i, -i}) {
          std::set<std::vector<int>> before;
          for (const Word& x : shift_overlap(F, t)) before.insert(x.letters());
          if (t == s) {
            before.insert(g.letters());
          } else if (t == -s) {
            before.insert(multiply(Word(r, std::vector<int>{t}), g).letters());
          }
          std::set<std::vector<int>> after;
          for (const Word& x : shift_overlap(grown, t)) {
            after.insert(x.letters());
          }
          CHECK(after == before);
        }
      }
    }
  }
}

TEST_CASE("letter orders validate and reverse") {
  LetterOrder order = LetterOrder::standard(2);
  CHECK(order.letter_less(1, -1));
  CHECK(order.letter_less(-1, 2));
  LetterOrder rev = order.reversed();
  CHECK(rev.letter_less(-2, 2));
  CHECK(rev.letter_less(2, -1));
  CHECK_THROWS_AS(LetterOrder::from_sequence(2, std::vector<int>{1, -1, 2, 2}),
                  apent::InvalidLetterError);
  CHECK_THROWS_AS(LetterOrder::from_sequence(2, std::vector<int>{1, -1, 2}),
                  apent::InvalidLetterError);
  LetterOrder custom =
      LetterOrder::from_sequence(2, std::vector<int>{2, 1, -2, -1});
  CHECK(custom.word_less(w(2, {2}), w(2, {1})));
  CHECK(to_string(w(2, {1, -2})) == "ab^-1");
  CHECK(to_string(Word(2)) == "e");
}
