#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "apent/groupalg.hpp"
#include "apent/matent.hpp"

using namespace apent::groupalg;
using apent::freegroup::Word;

namespace {

Word w(int rank, std::initializer_list<int> letters) {
  return Word(rank, std::vector<int>(letters));
}

bool same(const GroupAlgebraElement& a, const GroupAlgebraElement& b,
          double tol = 0.0) {
  if (a.coeffs().size() != b.coeffs().size()) return false;
  for (const auto& [g, coeff] : a.coeffs()) {
    if (std::abs(coeff - b.at(g)) > tol) return false;
  }
  return true;
}

// Small Gaussian-integer coefficients keep double arithmetic exact, so the
// algebra identities can be checked with zero tolerance.
GroupAlgebraElement random_element(std::mt19937& gen, int rank,
                                   int max_support) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<int> len(0, 3);
  std::uniform_int_distribution<int> letter(0, 2 * rank - 1);
  GroupAlgebraElement out(rank);
  for (int i = 0; i < max_support; ++i) {
    std::vector<int> letters;
    int target = len(gen);
    for (int j = 0; j < target; ++j) {
      int pick = letter(gen);
      letters.push_back(pick % 2 == 0 ? pick / 2 + 1 : -(pick / 2 + 1));
    }
    out.accumulate(Word(rank, letters), Complex(coeff(gen), coeff(gen)));
  }
  return out;
}

}  // namespace

TEST_CASE("convolution multiplies deltas like group elements") {
  auto da = GroupAlgebraElement::delta(w(2, {1}));
  auto db = GroupAlgebraElement::delta(w(2, {2}));
  auto da_inv = GroupAlgebraElement::delta(w(2, {-1}));

  CHECK(same(convolve(da, db), GroupAlgebraElement::delta(w(2, {1, 2}))));
  CHECK(same(convolve(da, da_inv), GroupAlgebraElement::delta(Word(2))));

  // (delta_e + delta_a)(delta_e + delta_{a^-1}) = 2 delta_e + delta_a +
  // delta_{a^-1}.
  auto left = add(GroupAlgebraElement::delta(Word(2)), da);
  auto right = add(GroupAlgebraElement::delta(Word(2)), da_inv);
  GroupAlgebraElement expected(2);
  expected.accumulate(Word(2), 2.0);
  expected.accumulate(w(2, {1}), 1.0);
  expected.accumulate(w(2, {-1}), 1.0);
  CHECK(same(convolve(left, right), expected));

  CHECK_THROWS_AS(convolve(da, GroupAlgebraElement::delta(w(3, {1}))),
                  apent::RankMismatchError);
}

TEST_CASE("involution conjugates and reverses") {
  auto da = GroupAlgebraElement::delta(w(2, {1}));
  CHECK(same(involution(da), GroupAlgebraElement::delta(w(2, {-1}))));
  auto imaginary = GroupAlgebraElement::delta(Word(2), Complex(0, 1));
  CHECK(same(involution(imaginary),
             GroupAlgebraElement::delta(Word(2), Complex(0, -1))));

  std::mt19937 gen(31);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_element(gen, 2, 4);
    auto b = random_element(gen, 2, 4);
    CHECK(same(involution(involution(a)), a));
    // Anti-homomorphism: (a b)* = b* a*.
    CHECK(same(involution(convolve(a, b)),
               convolve(involution(b), involution(a))));
  }
}

TEST_CASE("convolution is associative and distributive") {
  std::mt19937 gen(32);
  for (int trial = 0; trial < 60; ++trial) {
    auto a = random_element(gen, 2, 6);
    auto b = random_element(gen, 2, 6);
    auto c = random_element(gen, 2, 6);
    CHECK(same(convolve(convolve(a, b), c), convolve(a, convolve(b, c))));
    CHECK(same(convolve(a, add(b, c)), add(convolve(a, b), convolve(a, c))));
  }
}

TEST_CASE("the regular trace of a* a is the squared coefficient mass") {
  std::mt19937 gen(33);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_element(gen, 2, 5);
    double mass = 0.0;
    for (const auto& [g, coeff] : a.coeffs()) mass += std::norm(coeff);
    Complex trace = regular_trace(convolve(involution(a), a));
    CHECK(trace.real() == doctest::Approx(mass).epsilon(1e-12));
    CHECK(std::abs(trace.imag()) < 1e-12);
  }
}

TEST_CASE("induced values match the hand computation") {
  // a = delta_e: the induced function is the regular character.
  auto de = GroupAlgebraElement::delta(Word(2));
  CHECK(induced_value(de, Word(2)) == Complex(1.0));
  CHECK(induced_value(de, w(2, {1})) == Complex(0.0));

  // a = delta_e + delta_a.
  auto a = add(de, GroupAlgebraElement::delta(w(2, {1})));
  CHECK(induced_value(a, w(2, {1})).real() == doctest::Approx(0.5));
  CHECK(std::abs(induced_value(a, w(2, {1, 1}))) < 1e-15);
  CHECK(std::abs(induced_value(a, w(2, {2}))) < 1e-15);
  CHECK(induced_value(a, Word(2)).real() == doctest::Approx(1.0));

  CHECK_THROWS_AS(induced_value(GroupAlgebraElement(2), Word(2)),
                  apent::InvalidSpecError);
}

TEST_CASE("induced functions restrict to PSD matrices") {
  using apent::matent::Matrix;
  std::mt19937 gen(34);
  auto order = apent::freegroup::LetterOrder::standard(2);
  auto B2 = apent::freegroup::ball(2, 2, order);
  for (int trial = 0; trial < 25; ++trial) {
    auto a = random_element(gen, 2, 5);
    if (a.is_zero()) continue;
    Matrix q(B2.size(), B2.size());
    for (int i = 0; i < B2.size(); ++i) {
      for (int j = 0; j < B2.size(); ++j) {
        q(i, j) = induced_value(
            a, apent::freegroup::multiply(
                   apent::freegroup::inverse(B2.elements()[i]),
                   B2.elements()[j]));
      }
    }
    Eigen::VectorXd eig = apent::matent::hermitian_eigenvalues(q);
    CHECK(eig(0) >= -1e-10 * std::max(1.0, eig.cwiseAbs().maxCoeff()));
    // Hermitian symmetry of the induced function.
    CHECK(std::abs(induced_value(a, w(2, {1, -2})) -
                   std::conj(induced_value(a, w(2, {2, -1})))) < 1e-14);
  }
}

TEST_CASE("tiny coefficients are pruned") {
  GroupAlgebraElement a(2);
  a.accumulate(w(2, {1}), 1.0);
  a.accumulate(w(2, {1}), -1.0 + 1e-16);
  CHECK(a.is_zero());
}
