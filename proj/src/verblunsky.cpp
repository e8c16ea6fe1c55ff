#include "apent/verblunsky.hpp"

#include <string>
#include <utility>
#include <vector>

#include "apent/errors.hpp"

namespace apent::verblunsky {

using freegroup::Enumeration;
using freegroup::GroundedSet;
using freegroup::Word;
using matent::Contraction;
using matent::Matrix;
using pdf::PartialPdf;

namespace {

// The combinatorial data of the enlargement F -> F ∪ {g}: the direction and
// the positions of F ∩ sF and F \ sF in F's element order, plus the position
// in F of every translate wanted by the constrained entries.
struct EnlargementLayout {
  int direction = 0;
  std::vector<int> overlap;       // F ∩ sF, indices into F
  std::vector<int> rest;          // F \ sF, indices into F
  std::vector<int> overlap_src;   // index of s^{-1}h in F, per overlap entry
  int g_src = 0;                  // index of s^{-1}g in F
};

EnlargementLayout analyze_enlargement(const GroundedSet& f, const Word& g) {
  EnlargementLayout layout;
  layout.direction = freegroup::enlargement_direction(f, g);
  freegroup::shift_overlap_indices(f, layout.direction, &layout.overlap,
                                   &layout.rest);
  const Word shift(f.rank(), std::vector<int>{-layout.direction});
  layout.g_src = f.index_of(freegroup::multiply(shift, g));
  layout.overlap_src.reserve(layout.overlap.size());
  for (int idx : layout.overlap) {
    layout.overlap_src.push_back(
        f.index_of(freegroup::multiply(shift, f.elements()[idx])));
  }
  return layout;
}

// The grounded set holding all but the last element of `fg`.
GroundedSet drop_last(const GroundedSet& fg) {
  if (fg.size() < 2) {
    throw ShapeError("a one-step extension needs at least two elements");
  }
  std::vector<Word> words(fg.elements().begin(), fg.elements().end() - 1);
  return GroundedSet(fg.rank(), std::move(words));
}

// Assembles the three-block data [F \ sF, F ∩ sF, g] whose unknown corner is
// the free block Q(F \ sF, g).  The constrained column Q(F ∩ sF, g) is pulled
// from the base restriction via translation.
matent::PartialThreeBlock permuted_blocks(const PartialPdf& base,
                                          const EnlargementLayout& layout) {
  const int k = base.k;
  const auto rest_rows = matent::expand_block_indices(layout.rest, k);
  const auto overlap_rows = matent::expand_block_indices(layout.overlap, k);
  matent::PartialThreeBlock blocks;
  blocks.q11 = matent::select(base.q, rest_rows, rest_rows);
  blocks.q12 = matent::select(base.q, rest_rows, overlap_rows);
  blocks.q22 = matent::select(base.q, overlap_rows, overlap_rows);
  blocks.q33 = base.block(layout.g_src, layout.g_src);
  blocks.q23.resize(static_cast<int>(layout.overlap.size()) * k, k);
  for (std::size_t j = 0; j < layout.overlap.size(); ++j) {
    blocks.q23.block(static_cast<int>(j) * k, 0, k, k) =
        base.block(layout.overlap_src[j], layout.g_src);
  }
  return blocks;
}

}  // namespace

Contraction extract_coefficient(const PartialPdf& q_ext) {
  const GroundedSet f = drop_last(q_ext.set);
  const Word& g = q_ext.set.elements().back();
  const EnlargementLayout layout = analyze_enlargement(f, g);
  const int k = q_ext.k;
  const int ig = f.size();  // block position of g in q_ext

  // Entries in the F ∩ sF column of g are forced by translation; reject an
  // extension that disagrees with its own translates.
  for (std::size_t j = 0; j < layout.overlap.size(); ++j) {
    const double gap = (q_ext.block(layout.overlap[j], ig) -
                        q_ext.block(layout.overlap_src[j], layout.g_src))
                           .cwiseAbs()
                           .maxCoeff();
    if (gap > kTranslationTol) {
      throw ConsistencyError(
          "extension disagrees with its translate at " +
          freegroup::to_string(f.elements()[layout.overlap[j]]) + ": gap " +
          std::to_string(gap));
    }
  }

  std::vector<int> block_order;
  block_order.insert(block_order.end(), layout.rest.begin(),
                     layout.rest.end());
  block_order.insert(block_order.end(), layout.overlap.begin(),
                     layout.overlap.end());
  block_order.push_back(ig);
  const auto rows = matent::expand_block_indices(block_order, k);
  const Matrix permuted = matent::select(q_ext.q, rows, rows);
  auto [blocks, c] = matent::three_block_extract(
      permuted, static_cast<int>(layout.rest.size()) * k,
      static_cast<int>(layout.overlap.size()) * k, k);
  return c;
}

PartialPdf extend_with_coefficient(const PartialPdf& q, const Word& g,
                                   const Contraction& c) {
  const EnlargementLayout layout = analyze_enlargement(q.set, g);
  const int k = q.k;
  if (c.rows() != static_cast<int>(layout.rest.size()) * k || c.cols() != k) {
    throw ShapeError("coefficient is " + std::to_string(c.rows()) + "x" +
                     std::to_string(c.cols()) + ", expected " +
                     std::to_string(layout.rest.size() * k) + "x" +
                     std::to_string(k));
  }
  if (!pdf::is_nonsingular(q)) {
    throw SingularMatrixError("cannot extend a singular restriction");
  }

  const matent::PartialThreeBlock blocks = permuted_blocks(q, layout);
  const Matrix completed = matent::three_block_complete(blocks, c);
  const int rest_dim = static_cast<int>(layout.rest.size()) * k;
  const int overlap_dim = static_cast<int>(layout.overlap.size()) * k;
  const Matrix free_block =
      completed.block(0, rest_dim + overlap_dim, rest_dim, k);

  const int n = q.set.size();
  Matrix out((n + 1) * k, (n + 1) * k);
  out.topLeftCorner(n * k, n * k) = q.q;
  out.block(n * k, n * k, k, k) = blocks.q33;
  for (std::size_t j = 0; j < layout.rest.size(); ++j) {
    out.block(layout.rest[j] * k, n * k, k, k) =
        free_block.block(static_cast<int>(j) * k, 0, k, k);
  }
  for (std::size_t j = 0; j < layout.overlap.size(); ++j) {
    out.block(layout.overlap[j] * k, n * k, k, k) =
        blocks.q23.block(static_cast<int>(j) * k, 0, k, k);
  }
  for (int i = 0; i < n; ++i) {
    out.block(n * k, i * k, k, k) = out.block(i * k, n * k, k, k).adjoint();
  }

  std::vector<Word> words = q.set.elements();
  words.push_back(g);
  return PartialPdf{GroundedSet(q.set.rank(), std::move(words)), k,
                    std::move(out)};
}

std::vector<Contraction> coefficient_sequence_of(const PartialPdf& q) {
  const int n = q.set.size();
  const int k = q.k;
  std::vector<Contraction> coeffs;
  coeffs.reserve(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
  for (int step = 0; step + 1 < n; ++step) {
    std::vector<Word> words(q.set.elements().begin(),
                            q.set.elements().begin() + step + 2);
    PartialPdf prefix{GroundedSet(q.set.rank(), std::move(words)), k,
                      q.q.topLeftCorner((step + 2) * k, (step + 2) * k)};
    try {
      coeffs.push_back(extract_coefficient(prefix));
    } catch (const SingularMatrixError&) {
      throw SingularPrefixError(
          step, "restriction to the first " + std::to_string(step + 1) +
                    " elements is singular at step " + std::to_string(step));
    }
  }
  return coeffs;
}

std::vector<Contraction> coefficient_sequence(const pdf::PdfSpec& spec,
                                              const Enumeration& en,
                                              int steps) {
  if (steps < 0 || steps + 1 > en.size()) {
    throw ShapeError("enumeration holds " + std::to_string(en.size()) +
                     " words; cannot take " + std::to_string(steps) +
                     " steps");
  }
  const PartialPdf q = pdf::restrict_pdf(spec, en.prefix(steps + 1));
  return coefficient_sequence_of(q);
}

PartialPdf reconstruct(const std::vector<Contraction>& coeffs,
                       const Enumeration& en) {
  if (static_cast<int>(coeffs.size()) + 1 > en.size()) {
    throw ShapeError("enumeration too short for the coefficient sequence");
  }
  const int k = coeffs.empty() ? 1 : coeffs.front().cols();
  PartialPdf q{en.prefix(1), k,
               Matrix::Identity(k, k)};
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    q = extend_with_coefficient(q, en.words()[n + 1], coeffs[n]);
  }
  return q;
}

}  // namespace apent::verblunsky
