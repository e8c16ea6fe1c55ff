#pragma once

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "apent/errors.hpp"
#include "apent/freegroup.hpp"
#include "apent/groupalg.hpp"
#include "apent/matent.hpp"

namespace apent::pdf {

// Immutable description of a unital matrix-valued positive definite function
// on the free group.  Built through the factory functions; evaluation is
// pure.
class PdfSpec {
 public:
  enum class Kind { Regular, Haagerup, Mollified, Induced, DiagonalJoin,
                    Explicit };

  // phi(g) = I_k exactly at the identity and 0 elsewhere.
  static PdfSpec regular(int rank, int k);
  // Scalar multiplicative function: phi(s_i) = params[i-1] in the closed unit
  // disk, phi(s_i^{-1}) = conj(params[i-1]), extended multiplicatively along
  // reduced words.
  static PdfSpec haagerup(int rank, std::vector<groupalg::Complex> params);
  // phi_t(e) = I_k, phi_t(g) = t*base(g) otherwise; t in (0,1].
  static PdfSpec mollified(PdfSpec base, double t);
  // Scalar function induced by a nonzero group-algebra element.
  static PdfSpec induced(groupalg::GroupAlgebraElement element);
  // phi = diag(parts); block size is the sum of the parts'.
  static PdfSpec diagonal_join(std::vector<PdfSpec> parts);
  // Finite table on words of length <= radius; stores the adjoint at the
  // inverse word for every entry so hermitian symmetry is exact.  The value
  // at e must be I_k (use normalize_explicit for non-unital data).
  static PdfSpec explicit_table(
      int rank, int k, int radius,
      const std::vector<std::pair<freegroup::Word, matent::Matrix>>& values);

  Kind kind() const { return kind_; }
  int rank() const { return rank_; }
  int k() const { return k_; }

  // phi(g) as a k x k matrix; hermitian symmetry phi(g^{-1}) = phi(g)* is
  // exact for every kind except Induced (which meets it to rounding).
  matent::Matrix evaluate(const freegroup::Word& g) const;

  // Kind-specific accessors; throw InvalidSpecError on kind mismatch.
  const std::vector<groupalg::Complex>& haagerup_params() const;
  double mollify_t() const;
  const PdfSpec& mollify_base() const;
  const groupalg::GroupAlgebraElement& induced_element() const;
  const std::vector<PdfSpec>& join_parts() const;
  int explicit_radius() const;
  const std::map<std::vector<int>, matent::Matrix>& explicit_values() const;

 private:
  struct RegularData {};
  struct HaagerupData {
    std::vector<groupalg::Complex> params;
  };
  struct MollifiedData {
    double t;
    std::shared_ptr<const PdfSpec> base;
  };
  struct InducedData {
    groupalg::GroupAlgebraElement element;
  };
  struct DiagData {
    std::vector<PdfSpec> parts;
  };
  struct ExplicitData {
    int radius;
    std::map<std::vector<int>, matent::Matrix> values;
  };
  using Data = std::variant<RegularData, HaagerupData, MollifiedData,
                            InducedData, DiagData, ExplicitData>;

  PdfSpec(Kind kind, int rank, int k, Data data);

  Kind kind_;
  int rank_;
  int k_;
  Data data_;
};

// A positive definite function restricted to an ordered grounded set:
// the (k|F|)-square block matrix with Q(g,h) = phi(g^{-1}h).
struct PartialPdf {
  freegroup::GroundedSet set;
  int k = 1;
  matent::Matrix q;

  int block_count() const { return set.size(); }
  // The k x k block at word positions (i, j).
  matent::Matrix block(int i, int j) const;
};

// Gram matrix phi(w_i^{-1} w_j) over an arbitrary list of words, validated
// Hermitian and PSD (min eigenvalue >= -1e-9 * ||Q||).
matent::Matrix gram_matrix(const PdfSpec& spec,
                           const std::vector<freegroup::Word>& words);

PartialPdf restrict_pdf(const PdfSpec& spec, const freegroup::GroundedSet& f);

// Validates the PartialPdf invariants: Hermitian, PSD, unit diagonal blocks,
// and translation symmetry Q(g1,h1) = Q(g2,h2) whenever g1^{-1}h1 = g2^{-1}h2.
void validate_partial(const PartialPdf& p);

// Nonsingularity under the shared eigenvalue tolerance.
bool is_nonsingular(const PartialPdf& p);

// Renormalization of a possibly non-unital explicit table:
// returns log det phi(e) and, when that is finite, the unital conjugation
// phi_1(g) = phi(e)^{-1/2} phi(g) phi(e)^{-1/2} as a new spec.
struct NormalizeResult {
  double logdet_at_identity;
  std::optional<PdfSpec> spec;  // absent iff phi(e) is singular
};
NormalizeResult normalize_explicit(
    int rank, int k, int radius,
    const std::vector<std::pair<freegroup::Word, matent::Matrix>>& values);

}  // namespace apent::pdf
