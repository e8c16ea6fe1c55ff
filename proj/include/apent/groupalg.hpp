#pragma once

#include <complex>
#include <map>

#include "apent/errors.hpp"
#include "apent/freegroup.hpp"

namespace apent::groupalg {

using Complex = std::complex<double>;

// Coefficients whose magnitude drops below this after arithmetic are pruned,
// keeping supports finite under floating point.
inline constexpr double kPruneTol = 1e-15;

// Total order on words used for the coefficient map; independent of any
// letter order so elements of different provenance compare equal reliably.
struct WordKeyLess {
  bool operator()(const freegroup::Word& a, const freegroup::Word& b) const;
};

// A finitely supported function on the group with pointwise addition and
// convolution product.
class GroupAlgebraElement {
 public:
  using CoeffMap = std::map<freegroup::Word, Complex, WordKeyLess>;

  explicit GroupAlgebraElement(int rank) : rank_(rank) {}
  static GroupAlgebraElement delta(const freegroup::Word& g,
                                   Complex coeff = 1.0);

  int rank() const { return rank_; }
  const CoeffMap& coeffs() const { return coeffs_; }
  Complex at(const freegroup::Word& g) const;
  bool is_zero() const { return coeffs_.empty(); }

  // Accumulates into the coefficient at g and prunes if it becomes tiny.
  void accumulate(const freegroup::Word& g, Complex value);

 private:
  int rank_;
  CoeffMap coeffs_;
};

GroupAlgebraElement add(const GroupAlgebraElement& a,
                        const GroupAlgebraElement& b);
GroupAlgebraElement scale(const GroupAlgebraElement& a, Complex z);

// (a*b)_g = sum over h k = g of a_h b_k.
GroupAlgebraElement convolve(const GroupAlgebraElement& a,
                             const GroupAlgebraElement& b);

// a*_g = conj(a at g^{-1}); an anti-homomorphism.
GroupAlgebraElement involution(const GroupAlgebraElement& a);

// The regular trace: the coefficient at the identity.
Complex regular_trace(const GroupAlgebraElement& a);

// Value at g of the unital positive definite function induced by a:
// (a* conv delta_g conv a)(e) / (a* conv a)(e).  Throws InvalidSpecError on
// the zero element.
Complex induced_value(const GroupAlgebraElement& a, const freegroup::Word& g);

}  // namespace apent::groupalg
