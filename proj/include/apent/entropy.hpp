#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apent/freegroup.hpp"
#include "apent/pdf.hpp"

namespace apent::entropy {

// Two consecutive estimate increments below this declare convergence.
inline constexpr double kStabilizeTol = 1e-10;

enum class Method { Formula1, Formula2, Verblunsky, Seward, SewardCmi };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

// The result of running one entropy formula to a finite depth.  `terms` holds
// the per-level contributions and `estimates` the running estimate of the
// annealed entropy after each level: for the ball formulas each term is
// itself the estimate, for the series methods the estimates are partial sums.
// All values are extended reals (-infinity marks a singular restriction).
struct EntropyReport {
  Method method = Method::Formula1;
  std::string note;            // scaling convention for the terms
  std::vector<int> levels;     // level (or step) index per entry
  std::vector<double> terms;
  std::vector<double> estimates;
  double estimate = 0.0;       // final estimate; -infinity if singular
  bool stabilized = false;
  double last_increment = 0.0;
  int levels_computed = 0;
  std::optional<int> first_singular_level;
  std::vector<int> word_lengths;  // per step |g_{n+1}|, Verblunsky only
};

// The large-deviations rate value of a restriction:
// log det Q - sum_s log det Q_(F ∩ sF) over the positive generators s, or
// -infinity when Q is singular.
double h_F_rate(const pdf::PartialPdf& p);

// Ball formula: term at level n (n = 1..max_level) is
//   log det phi_(B_n) - sum_s log det phi_(B_n ∩ sB_n),
// a non-increasing sequence converging to the annealed entropy.
EntropyReport formula1_sequence(const pdf::PdfSpec& spec, int max_level);

// Union formula: term at level n (n = 0..max_level) is
//   sum_s log det phi_(B_n ∪ sB_n) - (2r-1) log det phi_(B_n),
// evaluated through B_n ∪ sB_n = B_{n+1} ∩ sB_{n+1}; also non-increasing,
// and interlacing the ball formula.
EntropyReport formula2_sequence(const pdf::PdfSpec& spec, int max_level);

// Series over the one-step extensions of an enumeration: term n is
// log det(I_k - C_n* C_n) for the n-th Verblunsky coefficient.  A singular
// prefix truncates the series and pins the estimate at -infinity.
EntropyReport verblunsky_series(const pdf::PdfSpec& spec,
                                const freegroup::Enumeration& en, int steps);

// Seward expansion along a length-lexicographic enumeration.  Level 0 is
//   2 H(B_0) - sum_{|s|=1} [H(B_0) - H(e | Q(s))],
// and level n >= 1 adds
//   -sum_{|w|=n+1} [H(e | Q(parent w)) - H(e | Q(w))],
// in the half-log-det convention; partial sums through level n equal
// H(B_{n+1}) - (2r-1) H(B_n) and converge to the annealed entropy.
EntropyReport seward_terms(const pdf::PdfSpec& spec,
                           const freegroup::Enumeration& en, int max_level);

// The same expansion rearranged into conditional mutual informations:
// level n is -sum_{|w|=n+1} I(e; C(w) | Q(parent w)), each summand >= 0.
EntropyReport seward_cmi_terms(const pdf::PdfSpec& spec,
                               const freegroup::Enumeration& en,
                               int max_level);

// Runs the chosen method to max_level (default: whatever keeps the largest
// matrix at k|B_4|) and applies the stabilization rule with the given
// tolerance.  Diagonal-join specs are additionally cross-checked against the
// sum of their parts; disagreement beyond 1e-8 is a ConsistencyError.
EntropyReport estimate_hann(const pdf::PdfSpec& spec, Method method,
                            int max_level = -1, double tol = kStabilizeTol);

// Same, with the enumeration built from a custom letter order (this only
// affects the Verblunsky and Seward methods; the ball formulas are
// order-free).
EntropyReport estimate_hann(const pdf::PdfSpec& spec, Method method,
                            int max_level, double tol,
                            const freegroup::LetterOrder& order);

// The annealed entropy of t phi + (1-t) chi_reg for each t in the grid.
std::vector<std::pair<double, double>> mollified_profile(
    const pdf::PdfSpec& spec, const std::vector<double>& t_grid, Method method,
    int max_level = -1);

}  // namespace apent::entropy
