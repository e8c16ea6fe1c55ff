#include "apent/pdf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace apent::pdf {

using freegroup::GroundedSet;
using freegroup::Word;
using groupalg::Complex;
using matent::Matrix;

PdfSpec::PdfSpec(Kind kind, int rank, int k, Data data)
    : kind_(kind), rank_(rank), k_(k), data_(std::move(data)) {
  if (rank_ < 1) throw InvalidSpecError("rank must be positive");
  if (k_ < 1) throw InvalidSpecError("block size must be positive");
}

PdfSpec PdfSpec::regular(int rank, int k) {
  return PdfSpec(Kind::Regular, rank, k, RegularData{});
}

PdfSpec PdfSpec::haagerup(int rank, std::vector<Complex> params) {
  if (static_cast<int>(params.size()) != rank) {
    throw InvalidSpecError("need one parameter per generator, got " +
                           std::to_string(params.size()));
  }
  for (const Complex& a : params) {
    if (std::abs(a) > 1.0 + 1e-12) {
      throw InvalidSpecError("parameter magnitude " +
                             std::to_string(std::abs(a)) +
                             " lies outside the closed unit disk");
    }
  }
  return PdfSpec(Kind::Haagerup, rank, 1, HaagerupData{std::move(params)});
}

PdfSpec PdfSpec::mollified(PdfSpec base, double t) {
  if (!(t > 0.0) || t > 1.0) {
    throw InvalidSpecError("mollification parameter must lie in (0,1]");
  }
  int rank = base.rank(), k = base.k();
  return PdfSpec(Kind::Mollified, rank, k,
                 MollifiedData{t, std::make_shared<PdfSpec>(std::move(base))});
}

PdfSpec PdfSpec::induced(groupalg::GroupAlgebraElement element) {
  if (element.is_zero()) {
    throw InvalidSpecError("the zero element induces no state");
  }
  int rank = element.rank();
  return PdfSpec(Kind::Induced, rank, 1, InducedData{std::move(element)});
}

PdfSpec PdfSpec::diagonal_join(std::vector<PdfSpec> parts) {
  if (parts.empty()) {
    throw InvalidSpecError("diagonal join needs at least one part");
  }
  int rank = parts.front().rank();
  int k = 0;
  for (const PdfSpec& part : parts) {
    if (part.rank() != rank) {
      throw RankMismatchError("diagonal join parts have mixed ranks");
    }
    k += part.k();
  }
  return PdfSpec(Kind::DiagonalJoin, rank, k, DiagData{std::move(parts)});
}

PdfSpec PdfSpec::explicit_table(
    int rank, int k, int radius,
    const std::vector<std::pair<Word, Matrix>>& values) {
  if (radius < 0) throw InvalidSpecError("radius must be nonnegative");
  std::map<std::vector<int>, Matrix> table;
  auto insert_checked = [&](const Word& w, const Matrix& m) {
    if (m.rows() != k || m.cols() != k) {
      throw ShapeError("explicit value must be " + std::to_string(k) + "x" +
                       std::to_string(k));
    }
    if (w.length() > radius) {
      throw InvalidSpecError("word " + freegroup::to_string(w) +
                             " lies outside radius " + std::to_string(radius));
    }
    auto [it, inserted] = table.emplace(w.letters(), m);
    if (!inserted &&
        (it->second - m).cwiseAbs().maxCoeff() >
            1e-12 * (1.0 + m.cwiseAbs().maxCoeff())) {
      throw InvalidSpecError("conflicting values for word " +
                             freegroup::to_string(w));
    }
  };
  for (const auto& [w, m] : values) {
    if (w.rank() != rank) {
      throw RankMismatchError("explicit table word rank differs");
    }
    insert_checked(w, m);
    // Hermitian symmetry is stored, not recomputed, so it holds exactly.
    insert_checked(freegroup::inverse(w), m.adjoint());
  }
  Word identity(rank);
  auto it = table.find(identity.letters());
  if (it == table.end()) {
    table.emplace(identity.letters(), Matrix::Identity(k, k));
  } else if ((it->second - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() >
             1e-8) {
    throw InvalidSpecError(
        "explicit table is not unital; renormalize it first");
  }
  return PdfSpec(Kind::Explicit, rank, k, ExplicitData{radius, std::move(table)});
}

namespace {

// Multiplicative evaluation for the scalar parameter family, computed on a
// canonical representative of {w, w^{-1}} so that the hermitian pair is
// bitwise exact.
Complex haagerup_value(const std::vector<Complex>& params, const Word& g) {
  const std::vector<int>& forward = g.letters();
  std::vector<int> backward = freegroup::inverse(g).letters();
  bool use_inverse = std::lexicographical_compare(
      backward.begin(), backward.end(), forward.begin(), forward.end());
  const std::vector<int>& letters = use_inverse ? backward : forward;
  Complex product = 1.0;
  for (int letter : letters) {
    product *= letter > 0 ? params[letter - 1] : std::conj(params[-letter - 1]);
  }
  return use_inverse ? std::conj(product) : product;
}

}  // namespace

Matrix PdfSpec::evaluate(const Word& g) const {
  if (g.rank() != rank_) {
    throw RankMismatchError("word rank differs from spec rank");
  }
  switch (kind_) {
    case Kind::Regular:
      if (g.is_identity()) return Matrix::Identity(k_, k_);
      return Matrix::Zero(k_, k_);
    case Kind::Haagerup: {
      Matrix out(1, 1);
      out(0, 0) = haagerup_value(std::get<HaagerupData>(data_).params, g);
      return out;
    }
    case Kind::Mollified: {
      if (g.is_identity()) return Matrix::Identity(k_, k_);
      const auto& data = std::get<MollifiedData>(data_);
      return data.t * data.base->evaluate(g);
    }
    case Kind::Induced: {
      Matrix out(1, 1);
      out(0, 0) = groupalg::induced_value(std::get<InducedData>(data_).element,
                                          g);
      return out;
    }
    case Kind::DiagonalJoin: {
      Matrix out = Matrix::Zero(k_, k_);
      int offset = 0;
      for (const PdfSpec& part : std::get<DiagData>(data_).parts) {
        out.block(offset, offset, part.k(), part.k()) = part.evaluate(g);
        offset += part.k();
      }
      return out;
    }
    case Kind::Explicit: {
      const auto& data = std::get<ExplicitData>(data_);
      auto it = data.values.find(g.letters());
      if (it != data.values.end()) return it->second;
      if (g.length() > data.radius) {
        throw InvalidSpecError("word " + freegroup::to_string(g) +
                               " lies outside the table radius " +
                               std::to_string(data.radius));
      }
      throw InvalidSpecError("no value tabulated for word " +
                             freegroup::to_string(g));
    }
  }
  throw ConsistencyError("unreachable spec kind");
}

const std::vector<Complex>& PdfSpec::haagerup_params() const {
  if (kind_ != Kind::Haagerup) throw InvalidSpecError("not a haagerup spec");
  return std::get<HaagerupData>(data_).params;
}

double PdfSpec::mollify_t() const {
  if (kind_ != Kind::Mollified) throw InvalidSpecError("not a mollified spec");
  return std::get<MollifiedData>(data_).t;
}

const PdfSpec& PdfSpec::mollify_base() const {
  if (kind_ != Kind::Mollified) throw InvalidSpecError("not a mollified spec");
  return *std::get<MollifiedData>(data_).base;
}

const groupalg::GroupAlgebraElement& PdfSpec::induced_element() const {
  if (kind_ != Kind::Induced) throw InvalidSpecError("not an induced spec");
  return std::get<InducedData>(data_).element;
}

const std::vector<PdfSpec>& PdfSpec::join_parts() const {
  if (kind_ != Kind::DiagonalJoin) {
    throw InvalidSpecError("not a diagonal join");
  }
  return std::get<DiagData>(data_).parts;
}

int PdfSpec::explicit_radius() const {
  if (kind_ != Kind::Explicit) throw InvalidSpecError("not an explicit table");
  return std::get<ExplicitData>(data_).radius;
}

const std::map<std::vector<int>, Matrix>& PdfSpec::explicit_values() const {
  if (kind_ != Kind::Explicit) throw InvalidSpecError("not an explicit table");
  return std::get<ExplicitData>(data_).values;
}

Matrix PartialPdf::block(int i, int j) const {
  return q.block(i * k, j * k, k, k);
}

Matrix gram_matrix(const PdfSpec& spec,
                   const std::vector<Word>& words) {
  const int k = spec.k();
  const int dim = k * static_cast<int>(words.size());
  Matrix q(dim, dim);
  for (std::size_t i = 0; i < words.size(); ++i) {
    Word gi_inv = freegroup::inverse(words[i]);
    for (std::size_t j = 0; j < words.size(); ++j) {
      q.block(i * k, j * k, k, k) =
          spec.evaluate(freegroup::multiply(gi_inv, words[j]));
    }
  }
  q = matent::hermitian_part(q);
  Eigen::VectorXd eig = matent::hermitian_eigenvalues(q);
  if (eig.size() > 0 &&
      eig(0) < -matent::kPsdTol * std::max(1.0, eig.cwiseAbs().maxCoeff())) {
    throw NotPsdError("restriction has eigenvalue " + std::to_string(eig(0)));
  }
  return q;
}

PartialPdf restrict_pdf(const PdfSpec& spec, const GroundedSet& f) {
  if (f.rank() != spec.rank()) {
    throw RankMismatchError("grounded set rank differs from spec rank");
  }
  return PartialPdf{f, spec.k(), gram_matrix(spec, f.elements())};
}

void validate_partial(const PartialPdf& p) {
  const int k = p.k, n = p.set.size();
  if (p.q.rows() != k * n || p.q.cols() != k * n) {
    throw ShapeError("partial PDF matrix size does not match k|F|");
  }
  Matrix h = matent::hermitian_part(p.q);
  Eigen::VectorXd eig = matent::hermitian_eigenvalues(h);
  if (eig(0) < -matent::kPsdTol * std::max(1.0, eig.cwiseAbs().maxCoeff())) {
    throw NotPsdError("partial PDF has eigenvalue " + std::to_string(eig(0)));
  }
  double scale = 1.0 + h.cwiseAbs().maxCoeff();
  // Group blocks by the word g^{-1}h they represent; all must agree, with
  // identity-word blocks equal to I_k.
  std::map<std::vector<int>, Matrix> seen;
  for (int i = 0; i < n; ++i) {
    Word gi_inv = freegroup::inverse(p.set.elements()[i]);
    for (int j = 0; j < n; ++j) {
      Word word = freegroup::multiply(gi_inv, p.set.elements()[j]);
      Matrix block = p.q.block(i * k, j * k, k, k);
      if (word.is_identity() &&
          (block - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() >
              1e-12 * scale) {
        throw ConsistencyError("diagonal block is not the identity");
      }
      auto [it, inserted] = seen.emplace(word.letters(), block);
      if (!inserted &&
          (it->second - block).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw ConsistencyError("translation symmetry violated at word " +
                               freegroup::to_string(word));
      }
    }
  }
}

bool is_nonsingular(const PartialPdf& p) {
  return matent::nonsingular_psd(p.q);
}

NormalizeResult normalize_explicit(
    int rank, int k, int radius,
    const std::vector<std::pair<Word, Matrix>>& values) {
  const Word identity(rank);
  const Matrix* at_e = nullptr;
  for (const auto& [w, m] : values) {
    if (w.is_identity()) at_e = &m;
  }
  if (at_e == nullptr) {
    throw InvalidSpecError("explicit data must include a value at e");
  }
  double logdet = matent::logdet_psd(*at_e);
  if (logdet == matent::neg_infinity()) {
    return NormalizeResult{logdet, std::nullopt};
  }
  Matrix conjugator = matent::inv_sqrt_psd(*at_e);
  std::vector<std::pair<Word, Matrix>> conjugated;
  conjugated.reserve(values.size());
  for (const auto& [w, m] : values) {
    conjugated.emplace_back(w, Matrix(conjugator * m * conjugator));
  }
  return NormalizeResult{
      logdet, PdfSpec::explicit_table(rank, k, radius, conjugated)};
}

}  // namespace apent::pdf
