#include "apent/groupalg.hpp"

#include <algorithm>

namespace apent::groupalg {

using freegroup::Word;

bool WordKeyLess::operator()(const Word& a, const Word& b) const {
  if (a.length() != b.length()) return a.length() < b.length();
  return std::lexicographical_compare(a.letters().begin(), a.letters().end(),
                                      b.letters().begin(), b.letters().end());
}

GroupAlgebraElement GroupAlgebraElement::delta(const Word& g, Complex coeff) {
  GroupAlgebraElement out(g.rank());
  out.accumulate(g, coeff);
  return out;
}

Complex GroupAlgebraElement::at(const Word& g) const {
  auto it = coeffs_.find(g);
  return it == coeffs_.end() ? Complex(0.0) : it->second;
}

void GroupAlgebraElement::accumulate(const Word& g, Complex value) {
  if (g.rank() != rank_) {
    throw RankMismatchError("word rank differs from element rank");
  }
  auto [it, inserted] = coeffs_.emplace(g, value);
  if (!inserted) it->second += value;
  if (std::abs(it->second) < kPruneTol) coeffs_.erase(it);
}

GroupAlgebraElement add(const GroupAlgebraElement& a,
                        const GroupAlgebraElement& b) {
  if (a.rank() != b.rank()) {
    throw RankMismatchError("adding elements of different rank");
  }
  GroupAlgebraElement out = a;
  for (const auto& [g, coeff] : b.coeffs()) out.accumulate(g, coeff);
  return out;
}

GroupAlgebraElement scale(const GroupAlgebraElement& a, Complex z) {
  GroupAlgebraElement out(a.rank());
  for (const auto& [g, coeff] : a.coeffs()) out.accumulate(g, z * coeff);
  return out;
}

GroupAlgebraElement convolve(const GroupAlgebraElement& a,
                             const GroupAlgebraElement& b) {
  if (a.rank() != b.rank()) {
    throw RankMismatchError("convolving elements of different rank");
  }
  GroupAlgebraElement out(a.rank());
  for (const auto& [h, ah] : a.coeffs()) {
    for (const auto& [k, bk] : b.coeffs()) {
      out.accumulate(freegroup::multiply(h, k), ah * bk);
    }
  }
  return out;
}

GroupAlgebraElement involution(const GroupAlgebraElement& a) {
  GroupAlgebraElement out(a.rank());
  for (const auto& [g, coeff] : a.coeffs()) {
    out.accumulate(freegroup::inverse(g), std::conj(coeff));
  }
  return out;
}

Complex regular_trace(const GroupAlgebraElement& a) {
  return a.at(Word(a.rank()));
}

Complex induced_value(const GroupAlgebraElement& a, const Word& g) {
  if (a.is_zero()) {
    throw InvalidSpecError("the zero element induces no state");
  }
  // (a* conv delta_g conv a)(e) = sum over v of conj(a at g v) * a_v.
  Complex numerator = 0.0;
  double denominator = 0.0;
  for (const auto& [v, av] : a.coeffs()) {
    numerator += std::conj(a.at(freegroup::multiply(g, v))) * av;
    denominator += std::norm(av);
  }
  return numerator / denominator;
}

}  // namespace apent::groupalg
