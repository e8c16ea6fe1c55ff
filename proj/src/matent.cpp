#include "apent/matent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace apent::matent {

namespace {

std::vector<int> concat(std::span<const int> a, std::span<const int> b) {
  std::vector<int> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void check_disjoint(std::span<const int> a, std::span<const int> b) {
  for (int i : a) {
    for (int j : b) {
      if (i == j) {
        throw ShapeError("index sets overlap at position " +
                         std::to_string(i));
      }
    }
  }
}

void check_in_range(const Matrix& q, std::span<const int> idx) {
  for (int i : idx) {
    if (i < 0 || i >= q.rows()) {
      throw ShapeError("index " + std::to_string(i) + " out of range for " +
                       std::to_string(q.rows()) + "-dim matrix");
    }
  }
}

double max_abs(const Matrix& q) {
  return q.size() == 0 ? 0.0 : q.cwiseAbs().maxCoeff();
}

}  // namespace

double neg_infinity() { return -std::numeric_limits<double>::infinity(); }

Matrix hermitian_part(const Matrix& q) {
  if (q.rows() != q.cols()) {
    throw ShapeError("expected a square matrix, got " +
                     std::to_string(q.rows()) + "x" + std::to_string(q.cols()));
  }
  double residual = max_abs(q - q.adjoint());
  if (residual > kHermitianTol * (1.0 + max_abs(q))) {
    throw ConsistencyError("matrix is not Hermitian (residual " +
                           std::to_string(residual) + ")");
  }
  return 0.5 * (q + q.adjoint());
}

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.jacobiSvd().singularValues()(0);
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& q) {
  Matrix h = hermitian_part(q);
  if (h.rows() == 0) return Eigen::VectorXd(0);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h,
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

bool nonsingular_psd(const Matrix& q) {
  Eigen::VectorXd eig = hermitian_eigenvalues(q);
  if (eig.size() == 0) return true;
  double scale = std::max(1.0, eig(eig.size() - 1));
  if (eig(0) < -kPsdTol * std::max(1.0, eig.cwiseAbs().maxCoeff())) {
    throw NotPsdError("matrix has eigenvalue " + std::to_string(eig(0)));
  }
  return eig(0) > kSingularTol * scale;
}

double logdet_psd(const Matrix& q) {
  Eigen::VectorXd eig = hermitian_eigenvalues(q);
  if (eig.size() == 0) return 0.0;
  double largest = eig.cwiseAbs().maxCoeff();
  if (eig(0) < -kPsdTol * std::max(1.0, largest)) {
    throw NotPsdError("matrix has eigenvalue " + std::to_string(eig(0)));
  }
  if (eig(0) <= kSingularTol * std::max(1.0, eig(eig.size() - 1))) {
    return neg_infinity();
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) sum += std::log(eig(i));
  return sum;
}

Matrix select(const Matrix& q, std::span<const int> rows,
              std::span<const int> cols) {
  check_in_range(q, rows);
  check_in_range(q, cols);
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(i, j) = q(rows[i], cols[j]);
    }
  }
  return out;
}

std::vector<int> expand_block_indices(std::span<const int> blocks, int k) {
  std::vector<int> out;
  out.reserve(blocks.size() * k);
  for (int b : blocks) {
    for (int j = 0; j < k; ++j) out.push_back(b * k + j);
  }
  return out;
}

Matrix schur_complement(const Matrix& q, std::span<const int> alpha,
                        std::span<const int> beta) {
  check_disjoint(alpha, beta);
  Matrix q_aa = select(q, alpha, alpha);
  if (beta.empty()) return hermitian_part(q_aa);
  Matrix q_bb = select(q, beta, beta);
  if (!nonsingular_psd(q_bb)) {
    throw SingularMatrixError("conditioning block is singular");
  }
  Matrix q_ab = select(q, alpha, beta);
  Matrix pivot = hermitian_part(q_bb);
  Matrix out = q_aa - q_ab * pivot.ldlt().solve(q_ab.adjoint());
  return 0.5 * (out + out.adjoint());
}

double cond_entropy(const Matrix& q, std::span<const int> alpha,
                    std::span<const int> beta) {
  if (alpha.empty()) return 0.0;
  return 0.5 * logdet_psd(schur_complement(q, alpha, beta));
}

double mutual_info(const Matrix& q, std::span<const int> alpha,
                   std::span<const int> beta, std::span<const int> gamma) {
  check_disjoint(alpha, beta);
  double given_gamma = cond_entropy(q, alpha, gamma);
  if (given_gamma == neg_infinity()) {
    throw SingularMatrixError(
        "mutual information undefined: conditional covariance is singular");
  }
  double given_both = cond_entropy(q, alpha, concat(beta, gamma));
  if (given_both == neg_infinity()) {
    return std::numeric_limits<double>::infinity();
  }
  return given_gamma - given_both;
}

namespace {

// Shared eigen route for sqrt and inverse sqrt.
Matrix psd_power(const Matrix& q, double exponent, bool require_nonsingular) {
  Matrix h = hermitian_part(q);
  if (h.rows() == 0) return h;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  Eigen::VectorXd eig = solver.eigenvalues();
  double largest = eig.cwiseAbs().maxCoeff();
  if (eig(0) < -kPsdTol * std::max(1.0, largest)) {
    throw NotPsdError("matrix has eigenvalue " + std::to_string(eig(0)));
  }
  if (require_nonsingular &&
      eig(0) <= kSingularTol * std::max(1.0, eig(eig.size() - 1))) {
    throw SingularMatrixError("matrix is singular within tolerance");
  }
  Eigen::VectorXd powered(eig.size());
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    powered(i) = std::pow(std::max(eig(i), 0.0), exponent);
  }
  Matrix out = solver.eigenvectors() * powered.asDiagonal() *
               solver.eigenvectors().adjoint();
  return 0.5 * (out + out.adjoint());
}

}  // namespace

Matrix sqrt_psd(const Matrix& q) { return psd_power(q, 0.5, false); }

Matrix inv_sqrt_psd(const Matrix& q) { return psd_power(q, -0.5, true); }

Contraction::Contraction(Matrix entries) : entries_(std::move(entries)) {
  norm_ = operator_norm(entries_);
  if (norm_ > 1.0 + kContractionTol) {
    throw ConsistencyError("operator norm " + std::to_string(norm_) +
                           " exceeds 1: not a contraction");
  }
}

Contraction two_block_contraction(const Matrix& q11, const Matrix& r,
                                  const Matrix& q22) {
  if (r.rows() != q11.rows() || r.cols() != q22.rows()) {
    throw ShapeError("off-diagonal block shape does not match the diagonal");
  }
  return Contraction(inv_sqrt_psd(q11) * r * inv_sqrt_psd(q22));
}

void PartialThreeBlock::validate() const {
  if (q11.rows() != q11.cols() || q22.rows() != q22.cols() ||
      q33.rows() != q33.cols() || q12.rows() != q11.rows() ||
      q12.cols() != q22.rows() || q23.rows() != q22.rows() ||
      q23.cols() != q33.rows()) {
    throw ShapeError("inconsistent three-block shapes");
  }
  // PSD within tolerance of the two known overlapping blocks.
  Eigen::VectorXd upper = hermitian_eigenvalues(upper_left());
  Eigen::VectorXd lower = hermitian_eigenvalues(lower_right());
  for (const Eigen::VectorXd& eig : {upper, lower}) {
    if (eig.size() > 0 &&
        eig(0) < -kPsdTol * std::max(1.0, eig.cwiseAbs().maxCoeff())) {
      throw NotPsdError("overlapping block has eigenvalue " +
                        std::to_string(eig(0)));
    }
  }
}

void PartialThreeBlock::require_partially_nonsingular() const {
  validate();
  if (!nonsingular_psd(upper_left()) || !nonsingular_psd(lower_right())) {
    throw SingularMatrixError("overlapping block is singular: partial "
                              "nonsingularity is required");
  }
}

Matrix PartialThreeBlock::upper_left() const {
  Matrix out(k() + l(), k() + l());
  out.topLeftCorner(k(), k()) = q11;
  out.topRightCorner(k(), l()) = q12;
  out.bottomLeftCorner(l(), k()) = q12.adjoint();
  out.bottomRightCorner(l(), l()) = q22;
  return out;
}

Matrix PartialThreeBlock::lower_right() const {
  Matrix out(l() + m(), l() + m());
  out.topLeftCorner(l(), l()) = q22;
  out.topRightCorner(l(), m()) = q23;
  out.bottomLeftCorner(m(), l()) = q23.adjoint();
  out.bottomRightCorner(m(), m()) = q33;
  return out;
}

Matrix three_block_complete(const PartialThreeBlock& partial,
                            const Contraction& c) {
  partial.require_partially_nonsingular();
  const int k = partial.k(), l = partial.l(), m = partial.m();
  if (c.rows() != k || c.cols() != m) {
    throw ShapeError("contraction must be " + std::to_string(k) + "x" +
                     std::to_string(m) + ", got " + std::to_string(c.rows()) +
                     "x" + std::to_string(c.cols()));
  }
  Matrix central = Matrix::Zero(k, m);
  Matrix s11 = partial.q11, s33 = partial.q33;
  if (l > 0) {
    Matrix pivot = hermitian_part(partial.q22);
    if (!nonsingular_psd(pivot)) {
      throw SingularMatrixError("middle block is singular");
    }
    Matrix solve23 = pivot.ldlt().solve(partial.q23);
    central = partial.q12 * solve23;
    s11 = partial.q11 -
          partial.q12 * pivot.ldlt().solve(partial.q12.adjoint());
    s33 = partial.q33 - partial.q23.adjoint() * solve23;
  }
  Matrix r = central + sqrt_psd(s11) * c.entries() * sqrt_psd(s33);

  Matrix out(k + l + m, k + l + m);
  out.topLeftCorner(k, k) = partial.q11;
  out.block(0, k, k, l) = partial.q12;
  out.block(0, k + l, k, m) = r;
  out.block(k, 0, l, k) = partial.q12.adjoint();
  out.block(k, k, l, l) = partial.q22;
  out.block(k, k + l, l, m) = partial.q23;
  out.block(k + l, 0, m, k) = r.adjoint();
  out.block(k + l, k, m, l) = partial.q23.adjoint();
  out.bottomRightCorner(m, m) = partial.q33;
  return hermitian_part(out);
}

std::pair<PartialThreeBlock, Contraction> three_block_extract(const Matrix& q,
                                                              int k, int l,
                                                              int m) {
  Matrix h = hermitian_part(q);
  if (k + l + m != h.rows() || k < 0 || l < 0 || m < 0) {
    throw ShapeError("block sizes do not sum to the matrix dimension");
  }
  PartialThreeBlock partial{
      h.topLeftCorner(k, k), h.block(0, k, k, l), h.block(k, k, l, l),
      h.block(k, k + l, l, m), h.bottomRightCorner(m, m)};
  partial.require_partially_nonsingular();

  Matrix central = Matrix::Zero(k, m);
  Matrix s11 = partial.q11, s33 = partial.q33;
  if (l > 0) {
    Matrix pivot = hermitian_part(partial.q22);
    Matrix solve23 = pivot.ldlt().solve(partial.q23);
    central = partial.q12 * solve23;
    s11 = partial.q11 -
          partial.q12 * pivot.ldlt().solve(partial.q12.adjoint());
    s33 = partial.q33 - partial.q23.adjoint() * solve23;
  }
  Matrix r = h.block(0, k + l, k, m);
  Contraction c(inv_sqrt_psd(s11) * (r - central) * inv_sqrt_psd(s33));
  return {std::move(partial), std::move(c)};
}

}  // namespace apent::matent
