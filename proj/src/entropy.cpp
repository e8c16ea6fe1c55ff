#include "apent/entropy.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "apent/errors.hpp"
#include "apent/matent.hpp"
#include "apent/rng.hpp"
#include "apent/verblunsky.hpp"

namespace apent::entropy {

using freegroup::Enumeration;
using freegroup::GroundedSet;
using freegroup::LetterOrder;
using freegroup::Word;
using matent::Matrix;
using pdf::PartialPdf;
using pdf::PdfSpec;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// H_phi(e | given) = (1/2) log det of the Schur complement of the given
// block in the gram matrix over {e} ∪ given.
double identity_cond_entropy(const PdfSpec& spec,
                             const std::vector<Word>& given) {
  std::vector<Word> words;
  words.reserve(given.size() + 1);
  words.emplace_back(spec.rank());
  words.insert(words.end(), given.begin(), given.end());
  const Matrix q = pdf::gram_matrix(spec, words);
  const int k = spec.k();
  std::vector<int> alpha(1, 0);
  std::vector<int> beta(given.size());
  for (std::size_t i = 0; i < given.size(); ++i) {
    beta[i] = static_cast<int>(i) + 1;
  }
  return matent::cond_entropy(q, matent::expand_block_indices(alpha, k),
                              matent::expand_block_indices(beta, k));
}

// Evaluates fn over the sphere in parallel; failures (singular conditioning
// blocks and the like) are collected instead of escaping a worker thread.
struct SphereValues {
  std::vector<double> values;
  bool failed = false;
};

SphereValues map_sphere(const std::vector<Word>& words,
                        const std::function<double(const Word&)>& fn) {
  SphereValues out;
  out.values.assign(words.size(), 0.0);
  std::vector<char> bad(words.size(), 0);
  rng::parallel_for(static_cast<int>(words.size()), [&](int i) {
    try {
      out.values[i] = fn(words[i]);
    } catch (const std::exception&) {
      bad[i] = 1;
    }
  });
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (bad[i] || out.values[i] == kNegInf ||
        out.values[i] == std::numeric_limits<double>::infinity()) {
      out.failed = true;
    }
  }
  return out;
}

// Fills estimates, the final estimate, and the stabilization diagnostics.
// For cumulative methods the estimates are the partial sums of the terms;
// otherwise each term stands alone as the current estimate.
void finish_report(EntropyReport* rep, bool cumulative, double tol) {
  rep->levels_computed = static_cast<int>(rep->terms.size());
  rep->estimates.clear();
  rep->estimates.reserve(rep->terms.size());
  double running = 0.0;
  for (double term : rep->terms) {
    if (cumulative) {
      running = (running == kNegInf || term == kNegInf) ? kNegInf
                                                        : running + term;
      rep->estimates.push_back(running);
    } else {
      rep->estimates.push_back(term);
    }
  }

  if (rep->first_singular_level.has_value()) {
    rep->estimate = kNegInf;
    rep->stabilized = true;  // exactly -infinity from here on
    rep->last_increment = 0.0;
    return;
  }
  if (rep->estimates.empty()) {
    rep->estimate = 0.0;
    rep->stabilized = false;
    rep->last_increment = 0.0;
    return;
  }
  rep->estimate = rep->estimates.back();

  auto increment = [&](std::size_t i) {
    double a = rep->estimates[i - 1], b = rep->estimates[i];
    if (a == kNegInf && b == kNegInf) return 0.0;
    return std::abs(b - a);
  };
  const std::size_t m = rep->estimates.size();
  if (m < 2) {
    rep->stabilized = false;
    rep->last_increment = 0.0;
  } else {
    rep->last_increment = increment(m - 1);
    rep->stabilized = rep->last_increment < tol &&
                      (m == 2 || increment(m - 2) < tol);
  }
}

int ball_size(int rank, int radius, const LetterOrder& order) {
  return freegroup::ball(rank, radius, order).size();
}

int default_level(Method method) {
  switch (method) {
    case Method::Formula1:
    case Method::Verblunsky:
      return 4;  // largest restriction is exactly over B_4
    case Method::Formula2:
    case Method::Seward:
    case Method::SewardCmi:
      return 3;  // these reach into B_4 at level 3
  }
  throw ConsistencyError("unreachable method");
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::Formula1: return "formula1";
    case Method::Formula2: return "formula2";
    case Method::Verblunsky: return "verblunsky";
    case Method::Seward: return "seward";
    case Method::SewardCmi: return "seward_cmi";
  }
  throw ConsistencyError("unreachable method");
}

Method method_from_name(const std::string& name) {
  if (name == "formula1") return Method::Formula1;
  if (name == "formula2") return Method::Formula2;
  if (name == "verblunsky") return Method::Verblunsky;
  if (name == "seward") return Method::Seward;
  if (name == "seward_cmi") return Method::SewardCmi;
  throw InvalidSpecError("unknown entropy method \"" + name + "\"");
}

double h_F_rate(const PartialPdf& p) {
  double total = matent::logdet_psd(p.q);
  if (total == kNegInf) return kNegInf;
  for (int s = 1; s <= p.set.rank(); ++s) {
    std::vector<int> overlap, rest;
    freegroup::shift_overlap_indices(p.set, s, &overlap, &rest);
    if (overlap.empty()) continue;
    const auto idx = matent::expand_block_indices(overlap, p.k);
    const double ld = matent::logdet_psd(matent::select(p.q, idx, idx));
    if (ld == kNegInf) return kNegInf;
    total -= ld;
  }
  return total;
}

EntropyReport formula1_sequence(const PdfSpec& spec, int max_level) {
  if (max_level < 1) {
    throw ShapeError("the ball formula needs at least one level");
  }
  const int rank = spec.rank(), k = spec.k();
  const LetterOrder order = LetterOrder::standard(rank);
  const PartialPdf full =
      pdf::restrict_pdf(spec, freegroup::ball(rank, max_level, order));

  EntropyReport rep;
  rep.method = Method::Formula1;
  rep.note = "term at ball level n is 2E_{n-1} = "
             "log det over B_n minus the generator-overlap log dets";
  for (int n = 1; n <= max_level; ++n) {
    const GroundedSet bn = freegroup::ball(rank, n, order);
    const int dim = bn.size() * k;
    const PartialPdf prefix{bn, k, full.q.topLeftCorner(dim, dim)};
    const double term = h_F_rate(prefix);
    rep.levels.push_back(n);
    rep.terms.push_back(term);
    if (term == kNegInf) {
      rep.first_singular_level = n;
      break;
    }
  }
  finish_report(&rep, /*cumulative=*/false, kStabilizeTol);
  return rep;
}

EntropyReport formula2_sequence(const PdfSpec& spec, int max_level) {
  if (max_level < 0) {
    throw ShapeError("the union formula needs a non-negative level");
  }
  const int rank = spec.rank(), k = spec.k();
  const LetterOrder order = LetterOrder::standard(rank);
  const PartialPdf full =
      pdf::restrict_pdf(spec, freegroup::ball(rank, max_level + 1, order));

  EntropyReport rep;
  rep.method = Method::Formula2;
  rep.note = "term at level n is 2E'_n = generator log dets over B_n ∪ sB_n "
             "(via B_{n+1} ∩ sB_{n+1}) minus (2r-1) log det over B_n";
  for (int n = 0; n <= max_level; ++n) {
    const int dim = ball_size(rank, n, order) * k;
    const double ld_ball = matent::logdet_psd(full.q.topLeftCorner(dim, dim));
    double term = -(2.0 * rank - 1.0) * ld_ball;
    bool singular = (ld_ball == kNegInf);
    if (!singular) {
      const GroundedSet next = freegroup::ball(rank, n + 1, order);
      for (int s = 1; s <= rank; ++s) {
        std::vector<int> overlap, rest;
        freegroup::shift_overlap_indices(next, s, &overlap, &rest);
        const auto idx = matent::expand_block_indices(overlap, k);
        const double ld = matent::logdet_psd(matent::select(full.q, idx, idx));
        if (ld == kNegInf) {
          singular = true;
          break;
        }
        term += ld;
      }
    }
    rep.levels.push_back(n);
    rep.terms.push_back(singular ? kNegInf : term);
    if (singular) {
      rep.first_singular_level = n;
      break;
    }
  }
  finish_report(&rep, /*cumulative=*/false, kStabilizeTol);
  return rep;
}

EntropyReport verblunsky_series(const PdfSpec& spec, const Enumeration& en,
                                int steps) {
  if (en.rank() != spec.rank()) {
    throw RankMismatchError("enumeration rank differs from spec rank");
  }
  if (steps < 0 || steps + 1 > en.size()) {
    throw ShapeError("enumeration holds too few words for " +
                     std::to_string(steps) + " steps");
  }
  const int k = spec.k();
  const PartialPdf full = pdf::restrict_pdf(spec, en.prefix(steps + 1));

  EntropyReport rep;
  rep.method = Method::Verblunsky;
  rep.note = "term n is log det(I_k - C_n* C_n) for the extension by g_{n+1}";
  for (int n = 0; n < steps; ++n) {
    const int dim = (n + 2) * k;
    const PartialPdf prefix{en.prefix(n + 2), k,
                            full.q.topLeftCorner(dim, dim)};
    try {
      const matent::Contraction c = verblunsky::extract_coefficient(prefix);
      const Matrix gap = Matrix::Identity(k, k) -
                         c.entries().adjoint() * c.entries();
      const double term = matent::logdet_psd(gap);
      rep.levels.push_back(n);
      rep.terms.push_back(term);
      rep.word_lengths.push_back(en.words()[n + 1].length());
      if (term == kNegInf) {
        rep.first_singular_level = n;
        break;
      }
    } catch (const SingularMatrixError&) {
      rep.first_singular_level = n;
      break;
    }
  }
  finish_report(&rep, /*cumulative=*/true, kStabilizeTol);
  return rep;
}

EntropyReport seward_terms(const PdfSpec& spec, const Enumeration& en,
                           int max_level) {
  if (en.kind() != Enumeration::Kind::LengthLex) {
    throw InvalidSpecError(
        "the Seward expansion needs a length-lexicographic enumeration");
  }
  if (en.rank() != spec.rank()) {
    throw RankMismatchError("enumeration rank differs from spec rank");
  }
  if (max_level < 0) {
    throw ShapeError("the Seward expansion needs a non-negative level");
  }
  const int rank = spec.rank();
  const LetterOrder& order = en.letter_order();

  EntropyReport rep;
  rep.method = Method::Seward;
  rep.note = "half-log-det levels; the partial sum through level n equals "
             "H(B_{n+1}) - (2r-1) H(B_n)";

  // Level 0: the identity's own entropy plus one conditional term per
  // length-one word.
  const double h_b0 =
      0.5 * matent::logdet_psd(pdf::gram_matrix(spec, {Word(rank)}));
  std::unordered_map<Word, double, freegroup::WordHash> prev_entropy;
  for (int n = 0; n <= max_level; ++n) {
    const std::vector<Word> sphere = freegroup::sphere(rank, n + 1, order);
    const SphereValues h = map_sphere(sphere, [&](const Word& w) {
      return identity_cond_entropy(spec, freegroup::q_set(w, order));
    });
    if (h.failed || h_b0 == kNegInf) {
      rep.levels.push_back(n);
      rep.terms.push_back(kNegInf);
      rep.first_singular_level = n;
      break;
    }
    double level = 0.0;
    if (n == 0) {
      level = 2.0 * h_b0;
      for (double value : h.values) level -= h_b0 - value;
    } else {
      for (std::size_t i = 0; i < sphere.size(); ++i) {
        level -= prev_entropy.at(freegroup::parent(sphere[i])) - h.values[i];
      }
    }
    rep.levels.push_back(n);
    rep.terms.push_back(level);
    prev_entropy.clear();
    for (std::size_t i = 0; i < sphere.size(); ++i) {
      prev_entropy.emplace(sphere[i], h.values[i]);
    }
  }
  finish_report(&rep, /*cumulative=*/true, kStabilizeTol);
  return rep;
}

EntropyReport seward_cmi_terms(const PdfSpec& spec, const Enumeration& en,
                               int max_level) {
  if (en.kind() != Enumeration::Kind::LengthLex) {
    throw InvalidSpecError(
        "the Seward expansion needs a length-lexicographic enumeration");
  }
  if (en.rank() != spec.rank()) {
    throw RankMismatchError("enumeration rank differs from spec rank");
  }
  if (max_level < 0) {
    throw ShapeError("the Seward expansion needs a non-negative level");
  }
  const int rank = spec.rank(), k = spec.k();
  const LetterOrder& order = en.letter_order();

  EntropyReport rep;
  rep.method = Method::SewardCmi;
  rep.note = "level n is -sum over |w| = n+1 of I(e; C(w) | Q(parent(w)))";

  for (int n = 0; n <= max_level; ++n) {
    const std::vector<Word> sphere = freegroup::sphere(rank, n + 1, order);
    const SphereValues info = map_sphere(sphere, [&](const Word& w) {
      const std::vector<Word> qw = freegroup::q_set(w, order);
      const std::vector<Word> qp =
          freegroup::q_set(freegroup::parent(w), order);
      std::unordered_set<Word, freegroup::WordHash> parent_side(qp.begin(),
                                                                qp.end());
      std::vector<Word> words;
      words.reserve(qw.size() + 1);
      words.emplace_back(rank);
      words.insert(words.end(), qw.begin(), qw.end());
      const Matrix q = pdf::gram_matrix(spec, words);

      std::vector<int> alpha{0}, beta, gamma;
      for (std::size_t i = 0; i < qw.size(); ++i) {
        (parent_side.count(qw[i]) ? gamma : beta)
            .push_back(static_cast<int>(i) + 1);
      }
      return matent::mutual_info(q, matent::expand_block_indices(alpha, k),
                                 matent::expand_block_indices(beta, k),
                                 matent::expand_block_indices(gamma, k));
    });
    if (info.failed) {
      rep.levels.push_back(n);
      rep.terms.push_back(kNegInf);
      rep.first_singular_level = n;
      break;
    }
    double level = 0.0;
    for (double value : info.values) level -= value;
    rep.levels.push_back(n);
    rep.terms.push_back(level);
  }
  finish_report(&rep, /*cumulative=*/true, kStabilizeTol);
  return rep;
}

EntropyReport estimate_hann(const PdfSpec& spec, Method method, int max_level,
                            double tol) {
  return estimate_hann(spec, method, max_level, tol,
                       LetterOrder::standard(spec.rank()));
}

EntropyReport estimate_hann(const PdfSpec& spec, Method method, int max_level,
                            double tol, const LetterOrder& order) {
  const int level = max_level >= 0 ? max_level : default_level(method);
  EntropyReport rep;
  switch (method) {
    case Method::Formula1:
      rep = formula1_sequence(spec, level);
      break;
    case Method::Formula2:
      rep = formula2_sequence(spec, level);
      break;
    case Method::Verblunsky: {
      const int count = ball_size(spec.rank(), level, order);
      rep = verblunsky_series(
          spec, Enumeration::length_lex(spec.rank(), order, count), count - 1);
      break;
    }
    case Method::Seward: {
      rep = seward_terms(
          spec, Enumeration::length_lex(spec.rank(), order, 1 + 2 * spec.rank()),
          level);
      break;
    }
    case Method::SewardCmi: {
      rep = seward_cmi_terms(
          spec, Enumeration::length_lex(spec.rank(), order, 1 + 2 * spec.rank()),
          level);
      break;
    }
  }
  finish_report(&rep,
                method == Method::Verblunsky || method == Method::Seward ||
                    method == Method::SewardCmi,
                tol);

  if (spec.kind() == PdfSpec::Kind::DiagonalJoin) {
    // The annealed entropy of a diagonal join is the sum over its parts,
    // level by level; verify that against the direct run.
    double parts_total = 0.0;
    for (const PdfSpec& part : spec.join_parts()) {
      const EntropyReport sub = estimate_hann(part, method, max_level, tol, order);
      parts_total = (parts_total == kNegInf || sub.estimate == kNegInf)
                        ? kNegInf
                        : parts_total + sub.estimate;
    }
    const bool direct_inf = rep.estimate == kNegInf;
    const bool parts_inf = parts_total == kNegInf;
    if (direct_inf != parts_inf ||
        (!direct_inf && std::abs(rep.estimate - parts_total) > 1e-8)) {
      throw ConsistencyError(
          "diagonal join disagrees with the sum of its parts");
    }
    rep.note += "; additivity cross-check against the parts passed";
  }
  return rep;
}

std::vector<std::pair<double, double>> mollified_profile(
    const PdfSpec& spec, const std::vector<double>& t_grid, Method method,
    int max_level) {
  std::vector<std::pair<double, double>> profile;
  profile.reserve(t_grid.size());
  for (double t : t_grid) {
    const EntropyReport rep =
        estimate_hann(PdfSpec::mollified(spec, t), method, max_level);
    profile.emplace_back(t, rep.estimate);
  }
  return profile;
}

}  // namespace apent::entropy
