#pragma once

#include <vector>

#include "apent/freegroup.hpp"
#include "apent/matent.hpp"
#include "apent/pdf.hpp"

namespace apent::verblunsky {

// Entries of a one-step extension forced by translation symmetry must agree
// with their translates to within this absolute tolerance.
inline constexpr double kTranslationTol = 1e-10;

// The Verblunsky coefficient of a one-step extension.  `q_ext` is a partial
// PDF over F ∪ {g} where F is the set of all elements but the last and g is
// the last; F ∪ {g} must be an enlargement of F in some direction s.  With
// the blocks reordered as [F \ sF, F ∩ sF, g], the coefficient is the unique
// contraction C with
//
//   Q(F \ sF, g) = Q12 Q22^{-1} Q23 + S11^{1/2} C S33^{1/2},
//
// a matrix of shape k|F \ sF| x k.  The entries Q(h, g) for h in F ∩ sF are
// determined by Q(h, g) = Q(s^{-1}h, s^{-1}g); they are checked against the
// stored values and a mismatch beyond kTranslationTol is a ConsistencyError.
// Throws SingularMatrixError when the restriction to F is singular.
matent::Contraction extract_coefficient(const pdf::PartialPdf& q_ext);

// Extends a nonsingular partial PDF over F to F ∪ {g}: the constrained
// entries are filled by translation and the free block from the coefficient.
// C must have shape k|F \ sF| x k.  The result is a valid partial PDF,
// nonsingular exactly when C is a strict contraction.
pdf::PartialPdf extend_with_coefficient(const pdf::PartialPdf& q,
                                        const freegroup::Word& g,
                                        const matent::Contraction& c);

// The coefficients C_0, ..., C_{N-2} of the chain of one-step extensions
// F_0 = {g_0} ⊂ F_1 ⊂ ... ⊂ F_{N-1} where F_n holds the first n+1 elements
// of q's ordering.  Throws SingularPrefixError (carrying the failing step)
// when some F_n restriction with n <= N-2 is singular.
std::vector<matent::Contraction> coefficient_sequence_of(
    const pdf::PartialPdf& q);

// Restricts the spec along prefixes of `en` and extracts the first `steps`
// coefficients; C_n has shape k|F_n \ s_nF_n| x k.  The enumeration must
// contain at least steps + 1 words.
std::vector<matent::Contraction> coefficient_sequence(
    const pdf::PdfSpec& spec, const freegroup::Enumeration& en, int steps);

// Inverse of coefficient_sequence: builds the unique partial PDF over the
// enumeration prefix of size coeffs.size() + 1 with the given coefficients.
// Every C_n must be strictly contractive and match the shape dictated by
// step n of the enumeration; a mismatch is a ShapeError.  The block rank k
// is inferred from the column count of C_0 (1 when coeffs is empty).
pdf::PartialPdf reconstruct(const std::vector<matent::Contraction>& coeffs,
                            const freegroup::Enumeration& en);

}  // namespace apent::verblunsky
