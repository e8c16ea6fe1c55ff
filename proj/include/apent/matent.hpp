#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "apent/errors.hpp"

namespace apent::matent {

using Matrix = Eigen::MatrixXcd;

// A PSD matrix counts as nonsingular iff min eigenvalue > this times
// max(1, max eigenvalue); keeps the -inf branches deterministic.
inline constexpr double kSingularTol = 1e-10;
// Hermitian storage tolerance, relative to 1 + max |entry|.
inline constexpr double kHermitianTol = 1e-12;
// PSD acceptance: eigenvalues >= -kPsdTol * max(1, ||Q||) pass (and clamp).
inline constexpr double kPsdTol = 1e-9;
// A contraction may exceed operator norm 1 by this much; it is strict when
// the norm is below 1 minus this.
inline constexpr double kContractionTol = 1e-10;

double neg_infinity();

// Validates Hermitian symmetry within tolerance and returns (Q + Q*)/2.
Matrix hermitian_part(const Matrix& q);

// Largest singular value.
double operator_norm(const Matrix& a);

// Eigenvalues of the symmetrized matrix, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Matrix& q);

// min eig > kSingularTol * max(1, max eig), with PSD validation.
bool nonsingular_psd(const Matrix& q);

// log det of a PSD matrix; -infinity when singular within tolerance.
// Throws NotPsdError when an eigenvalue is negative beyond tolerance.
double logdet_psd(const Matrix& q);

// Rows/columns of q at the given positions (order preserved).
Matrix select(const Matrix& q, std::span<const int> rows,
              std::span<const int> cols);

// Expands positions of k-sized blocks into entry positions:
// p -> {p*k, ..., p*k + k-1}.
std::vector<int> expand_block_indices(std::span<const int> blocks, int k);

// Q_aa - Q_ab Q_bb^{-1} Q_ba.  beta empty returns Q_aa.  Throws
// SingularMatrixError when Q_bb is singular.
Matrix schur_complement(const Matrix& q, std::span<const int> alpha,
                        std::span<const int> beta);

// (1/2) logdet of the Schur complement: the tuple-entropy convention.
// beta empty gives the unconditional entropy; alpha empty gives 0.
double cond_entropy(const Matrix& q, std::span<const int> alpha,
                    std::span<const int> beta = {});

// I_Q(alpha; beta | gamma) = H(alpha|gamma) - H(alpha|beta,gamma), in
// [0, +infinity].  Throws SingularMatrixError when a conditioning block is
// singular or H(alpha|gamma) is already -infinity.
double mutual_info(const Matrix& q, std::span<const int> alpha,
                   std::span<const int> beta, std::span<const int> gamma = {});

// PSD square root via eigendecomposition; eigenvalues within -kPsdTol*||Q||
// of zero are clamped.  Throws NotPsdError beyond that.
Matrix sqrt_psd(const Matrix& q);

// Inverse PSD square root; throws SingularMatrixError when singular.
Matrix inv_sqrt_psd(const Matrix& q);

// A complex matrix of operator norm at most 1 (+ tolerance).
class Contraction {
 public:
  explicit Contraction(Matrix entries);

  const Matrix& entries() const { return entries_; }
  int rows() const { return static_cast<int>(entries_.rows()); }
  int cols() const { return static_cast<int>(entries_.cols()); }
  double norm() const { return norm_; }
  bool strict() const { return norm_ < 1.0 - kContractionTol; }

 private:
  Matrix entries_;
  double norm_;
};

// C = Q11^{-1/2} R Q22^{-1/2}: the contraction with
// R = Q11^{1/2} C Q22^{1/2}, so [[Q11, R], [R*, Q22]] is PSD iff ||C|| <= 1.
Contraction two_block_contraction(const Matrix& q11, const Matrix& r,
                                  const Matrix& q22);

// The data of a 3x3-block Hermitian matrix with the (1,3) corner unknown.
struct PartialThreeBlock {
  Matrix q11, q12, q22, q23, q33;

  int k() const { return static_cast<int>(q11.rows()); }
  int l() const { return static_cast<int>(q22.rows()); }
  int m() const { return static_cast<int>(q33.rows()); }

  // Shape consistency plus PSD of the two overlapping 2x2 block matrices.
  void validate() const;
  // Additionally requires both overlapping block matrices nonsingular.
  void require_partially_nonsingular() const;

  Matrix upper_left() const;   // [[Q11, Q12], [Q12*, Q22]]
  Matrix lower_right() const;  // [[Q22, Q23], [Q23*, Q33]]
};

// Fills the unknown corner as R = Q12 Q22^{-1} Q23 + S11^{1/2} C S33^{1/2}
// where S11, S33 are the Schur complements of Q22 in the two overlapping
// blocks.  C must be k x m.  The result is PSD, and nonsingular iff the
// partial matrix is partially nonsingular and C is strict.
Matrix three_block_complete(const PartialThreeBlock& partial,
                            const Contraction& c);

// Inverse of three_block_complete on nonsingular-overlap instances.
std::pair<PartialThreeBlock, Contraction> three_block_extract(const Matrix& q,
                                                              int k, int l,
                                                              int m);

}  // namespace apent::matent
