#include "apent/randrep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "apent/verblunsky.hpp"

namespace apent::randrep {

using freegroup::Enumeration;
using freegroup::GroundedSet;
using freegroup::Word;
using matent::Contraction;
using matent::Matrix;

namespace {

// Stream layout: sampling phase p, sample i -> Philox stream (p << 32) + i.
// Every consumer of randomness inside one sample draws from that single
// stream, so reports do not depend on thread count or scheduling.
std::uint64_t stream_id(std::uint64_t phase, int index) {
  return (phase << 32) + static_cast<std::uint64_t>(index);
}

// CDF of |v|^2 for v standard complex Gaussian in C^n: the k=1 Wishart law
// q^{n-1} e^{-q} / (n-1)!, integrated by the usual partial exponential sum.
double wishart_cdf_k1(int n, double x) {
  if (x <= 0.0) return 0.0;
  double term = std::exp(-x);
  double sum = term;
  for (int j = 1; j < n; ++j) {
    term *= x / j;
    sum += term;
  }
  return 1.0 - sum;
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
// Legendre recurrence; order m integrates polynomials of degree 2m-1
// exactly.
void gauss_legendre(int m, std::vector<double>* nodes,
                    std::vector<double>* weights) {
  nodes->assign(m, 0.0);
  weights->assign(m, 0.0);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < m; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      dp = m * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    (*nodes)[i] = -x;
    (*nodes)[m - 1 - i] = x;
    (*weights)[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    (*weights)[m - 1 - i] = (*weights)[i];
  }
}

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

}  // namespace

Matrix RandomRepresentation::apply(const Word& g) const {
  Matrix out = Matrix::Identity(n, n);
  for (int letter : g.letters()) {
    const Matrix& u = generators.at(static_cast<std::size_t>(
        std::abs(letter) - 1));
    out = letter > 0 ? Matrix(out * u) : Matrix(out * u.adjoint());
  }
  return out;
}

Matrix haar_unitary(int n, rng::Philox& gen) {
  if (n < 1) throw ShapeError("a unitary needs dimension at least one");
  Matrix z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) z(i, j) = gen.complex_normal();
  }
  const Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  // A = QR = (Q Lambda)(Lambda* R) with Lambda the diagonal phases of R;
  // rescaling Q by Lambda makes the factorization unique and Q Haar.
  for (int j = 0; j < n; ++j) {
    const std::complex<double> d = qr.matrixQR()(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0) ? d / a : 1.0;
  }
  return q;
}

RandomRepresentation sample_representation(int rank, int n, rng::Philox& gen) {
  if (rank < 1) throw ShapeError("a representation needs at least one generator");
  RandomRepresentation rep;
  rep.n = n;
  rep.generators.reserve(rank);
  for (int s = 0; s < rank; ++s) rep.generators.push_back(haar_unitary(n, gen));
  return rep;
}

pdf::PartialPdf orbit_gram(const RandomRepresentation& rep, int k,
                           const GroundedSet& f) {
  if (f.rank() != rep.rank()) {
    throw RankMismatchError("representation rank differs from the set's");
  }
  const int n = rep.n;
  if (k < 1 || n < k * f.size()) {
    throw ShapeError("dimension " + std::to_string(n) +
                     " is too small for a " + std::to_string(k) +
                     "-frame orbit over " + std::to_string(f.size()) +
                     " words");
  }

  // Frames X_g = pi(g) V by the parent recursion X_{s h} = pi(s) X_h, so a
  // word of length m costs one n x k product instead of a fresh n x n one.
  std::unordered_map<Word, Matrix, freegroup::WordHash> frames;
  std::function<const Matrix&(const Word&)> frame =
      [&](const Word& g) -> const Matrix& {
    const auto it = frames.find(g);
    if (it != frames.end()) return it->second;
    Matrix x;
    if (g.is_identity()) {
      x = Matrix::Identity(n, k);
    } else {
      const int s = g.letters()[0];
      const Matrix& u = rep.generators[static_cast<std::size_t>(
          std::abs(s) - 1)];
      const Matrix& base = frame(freegroup::parent(g));
      x = s > 0 ? Matrix(u * base) : Matrix(u.adjoint() * base);
    }
    return frames.emplace(g, std::move(x)).first->second;
  };

  Matrix x(n, k * f.size());
  for (int i = 0; i < f.size(); ++i) {
    x.middleCols(i * k, k) = frame(f.elements()[i]);
  }
  // Q = X*X is PSD with unit diagonal blocks by construction; symmetrize to
  // kill the last rounding asymmetry.
  return pdf::PartialPdf{f, k, matent::hermitian_part(x.adjoint() * x)};
}

std::vector<Contraction> random_verblunsky(const RandomRepresentation& rep,
                                           int k, const Enumeration& en,
                                           int m) {
  if (m < 0 || m + 1 > en.size()) {
    throw ShapeError("enumeration holds too few words for " +
                     std::to_string(m) + " coefficients");
  }
  return verblunsky::coefficient_sequence_of(orbit_gram(rep, k,
                                                        en.prefix(m + 1)));
}

Contraction sample_sigma(int n, int l, int k, rng::Philox& gen) {
  if (k < 1 || l < 1 || l > n || k > n) {
    throw ShapeError("no " + std::to_string(l) + " x " + std::to_string(k) +
                     " corner inside a unitary of dimension " +
                     std::to_string(n));
  }
  return Contraction(haar_unitary(n, gen).topLeftCorner(l, k));
}

double sigma_density_k1(int n, int l, const Eigen::VectorXcd& y) {
  if (l < 1 || n <= l) {
    throw ShapeError("the closed-form density needs n > l >= 1");
  }
  const double r2 = y.squaredNorm();
  if (r2 > 1.0) return 0.0;
  const double log_const = std::lgamma(n) - std::lgamma(n - l) -
                           l * std::log(std::numbers::pi);
  if (n - l - 1 == 0) return std::exp(log_const);
  return std::exp(log_const + (n - l - 1) * std::log1p(-r2));
}

double ks_statistic(std::vector<double> values,
                    const std::function<double(double)>& cdf) {
  std::sort(values.begin(), values.end());
  const double count = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = cdf(values[i]);
    d = std::max(d, std::max(f - i / count, (i + 1) / count - f));
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                             static_cast<double>(j) / b.size()));
  }
  return d;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw ShapeError("correlation needs sequences of equal length");
  }
  if (a.size() < 2) return 0.0;
  const double ma = mean_of(a), mb = mean_of(b);
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

SampleReport test_wishart_k1(int n, int samples, std::uint64_t seed,
                             double threshold, bool keep_samples) {
  if (n < 1 || samples < 1) {
    throw InvalidSpecError("the Wishart check needs n >= 1 and samples >= 1");
  }
  std::vector<double> values(samples);
  rng::parallel_for(samples, [&](int i) {
    rng::Philox gen(seed, stream_id(0, i));
    double q = 0.0;
    for (int j = 0; j < n; ++j) q += std::norm(gen.complex_normal());
    values[i] = q;
  });

  SampleReport rep;
  rep.test = "wishart";
  rep.n = n;
  rep.samples = samples;
  rep.seed = seed;
  rep.threshold = threshold;
  const double ks =
      ks_statistic(values, [n](double x) { return wishart_cdf_k1(n, x); });
  const double mean = mean_of(values);
  rep.statistics["ks"] = ks;
  rep.statistics["mean"] = mean;
  rep.pass = ks < threshold && std::abs(mean - n) <= 0.5;
  if (keep_samples) rep.dump["q"] = std::move(values);
  return rep;
}

SampleReport test_sigma_radial(int n, int samples, std::uint64_t seed,
                               double threshold, bool keep_samples) {
  if (n < 2 || samples < 1) {
    throw InvalidSpecError("the radial check needs n >= 2 and samples >= 1");
  }
  std::vector<double> radii(samples);
  rng::parallel_for(samples, [&](int i) {
    rng::Philox gen(seed, stream_id(0, i));
    radii[i] = std::abs(sample_sigma(n, 1, 1, gen).entries()(0, 0));
  });

  SampleReport rep;
  rep.test = "sigma";
  rep.n = n;
  rep.samples = samples;
  rep.seed = seed;
  rep.threshold = threshold;
  const double ks = ks_statistic(radii, [n](double rho) {
    if (rho <= 0.0) return 0.0;
    if (rho >= 1.0) return 1.0;
    return 1.0 - std::pow(1.0 - rho * rho, n - 1);
  });
  rep.statistics["ks"] = ks;
  rep.pass = ks < threshold;
  if (keep_samples) rep.dump["radius"] = std::move(radii);
  return rep;
}

SampleReport ldp_rate_check(const std::vector<int>& n_values, double c) {
  if (c <= 0.0 || c >= 1.0) {
    throw InvalidSpecError("the tail threshold must lie strictly in (0,1)");
  }
  if (n_values.empty()) {
    throw InvalidSpecError("the rate check needs at least one dimension");
  }

  SampleReport rep;
  rep.test = "ldp";
  rep.samples = 0;
  rep.seed = 0;
  rep.threshold = 1.0;  // maximal allowed gap / bound ratio
  const double target = std::log1p(-c * c);
  double max_ratio = 0.0, max_quad_gap = 0.0;
  for (int n : n_values) {
    if (n < 2) throw InvalidSpecError("tail exponents need n >= 2");
    rep.n = std::max(rep.n, n);
    // P(|y| >= c) = int_c^1 (n-1)(1-r^2)^{n-2} 2r dr; substituting
    // u = 1 - r^2 leaves the polynomial (n-1) u^{n-2} on [0, 1-c^2], which
    // Gauss-Legendre of order n/2 + 1 integrates exactly.
    std::vector<double> nodes, weights;
    gauss_legendre(n / 2 + 1, &nodes, &weights);
    const double upper = 1.0 - c * c;
    double p = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double u = 0.5 * upper * (nodes[i] + 1.0);
      p += 0.5 * upper * weights[i] * (n - 1) * std::pow(u, n - 2);
    }
    const double rate = std::log(p) / n;
    const double exact = (n - 1.0) / n * target;
    const double bound = 5.0 * std::log(static_cast<double>(n)) / n;
    const std::string tag = "_n" + std::to_string(n);
    rep.statistics["rate" + tag] = rate;
    rep.statistics["exact" + tag] = exact;
    rep.statistics["bound" + tag] = bound;
    max_ratio = std::max(max_ratio, std::abs(rate - target) / bound);
    max_quad_gap = std::max(max_quad_gap, std::abs(rate - exact));
  }
  rep.statistics["max_gap_ratio"] = max_ratio;
  rep.statistics["max_quadrature_gap"] = max_quad_gap;
  rep.pass = max_ratio <= 1.0 && max_quad_gap < 1e-10;
  return rep;
}

SampleReport test_dil_dist(int n, int k, const GroundedSet& f, const Word& g,
                           int samples, std::uint64_t seed, double threshold,
                           bool keep_samples) {
  if (samples < 2) throw InvalidSpecError("two-sample tests need samples >= 2");
  if (n < k * (f.size() + 1)) {
    throw ShapeError("dimension " + std::to_string(n) +
                     " is too small for the enlarged set");
  }
  const int t = freegroup::enlargement_direction(f, g);
  std::vector<int> overlap, rest;
  freegroup::shift_overlap_indices(f, t, &overlap, &rest);
  const int l = k * static_cast<int>(rest.size());
  const int n_eff = n - k * static_cast<int>(overlap.size());

  std::vector<Word> extended = f.elements();
  extended.push_back(g);
  const GroundedSet fg(f.rank(), std::move(extended));

  std::vector<double> norms(samples), entries(samples), logdets(samples);
  std::vector<char> rejected(samples, 0);
  rng::parallel_for(samples, [&](int i) {
    try {
      rng::Philox gen(seed, stream_id(0, i));
      const RandomRepresentation rep_i =
          sample_representation(f.rank(), n, gen);
      const pdf::PartialPdf q = orbit_gram(rep_i, k, fg);
      logdets[i] =
          matent::logdet_psd(q.q.topLeftCorner(k * f.size(), k * f.size()));
      const Contraction c = verblunsky::extract_coefficient(q);
      norms[i] = c.norm();
      entries[i] = c.entries()(0, 0).real();
    } catch (const std::exception&) {
      rejected[i] = 1;  // probability-zero singular prefix
    }
  });

  std::vector<double> ref_norms(samples), ref_entries(samples);
  rng::parallel_for(samples, [&](int i) {
    rng::Philox gen(seed, stream_id(1, i));
    const Contraction c = sample_sigma(n_eff, l, k, gen);
    ref_norms[i] = c.norm();
    ref_entries[i] = c.entries()(0, 0).real();
  });

  SampleReport rep;
  rep.test = "dildist";
  rep.n = n;
  rep.samples = samples;
  rep.seed = seed;
  rep.threshold = threshold;
  int rejected_count = 0;
  for (char r : rejected) rejected_count += r;
  std::vector<double> kept_norms, kept_entries, kept_logdets;
  for (int i = 0; i < samples; ++i) {
    if (rejected[i]) continue;
    kept_norms.push_back(norms[i]);
    kept_entries.push_back(entries[i]);
    kept_logdets.push_back(logdets[i]);
  }
  const double ks_norm = ks_two_sample(kept_norms, ref_norms);
  const double ks_entry = ks_two_sample(kept_entries, ref_entries);
  const double corr = std::abs(correlation(kept_norms, kept_logdets));
  rep.statistics["ks_norm"] = ks_norm;
  rep.statistics["ks_entry"] = ks_entry;
  rep.statistics["corr_norm_logdet"] = corr;
  rep.statistics["singular"] = rejected_count;
  rep.statistics["reference_n"] = n_eff;
  rep.statistics["reference_rows"] = l;
  rep.pass = ks_norm < threshold && ks_entry < threshold &&
             rejected_count == 0 && corr < 0.05;
  if (keep_samples) {
    rep.dump["norm"] = std::move(kept_norms);
    rep.dump["entry"] = std::move(kept_entries);
    rep.dump["logdet_F"] = std::move(kept_logdets);
    rep.dump["ref_norm"] = std::move(ref_norms);
    rep.dump["ref_entry"] = std::move(ref_entries);
  }
  return rep;
}

SampleReport test_kilnen(int n, int samples, std::uint64_t seed,
                         double threshold, bool keep_samples) {
  constexpr int kCoefficients = 4;
  if (n < kCoefficients + 1) {
    throw ShapeError("the independence check needs n >= 5");
  }
  if (samples < 2) throw InvalidSpecError("correlations need samples >= 2");
  const Enumeration en = Enumeration::length_lex(
      2, freegroup::LetterOrder::standard(2), kCoefficients + 1);

  std::vector<std::vector<double>> squares(
      kCoefficients, std::vector<double>(samples, 0.0));
  std::vector<char> rejected(samples, 0);
  rng::parallel_for(samples, [&](int i) {
    try {
      rng::Philox gen(seed, stream_id(0, i));
      const RandomRepresentation rep_i = sample_representation(2, n, gen);
      const std::vector<Contraction> coeffs =
          random_verblunsky(rep_i, 1, en, kCoefficients);
      for (int c = 0; c < kCoefficients; ++c) {
        squares[c][i] = coeffs[c].norm() * coeffs[c].norm();
      }
    } catch (const std::exception&) {
      rejected[i] = 1;
    }
  });

  SampleReport rep;
  rep.test = "kilnen";
  rep.n = n;
  rep.samples = samples;
  rep.seed = seed;
  rep.threshold = threshold;
  int rejected_count = 0;
  for (char r : rejected) rejected_count += r;
  std::vector<std::vector<double>> kept(kCoefficients);
  for (int i = 0; i < samples; ++i) {
    if (rejected[i]) continue;
    for (int c = 0; c < kCoefficients; ++c) kept[c].push_back(squares[c][i]);
  }
  double max_corr = 0.0;
  for (int a = 0; a < kCoefficients; ++a) {
    for (int b = a + 1; b < kCoefficients; ++b) {
      const double corr = std::abs(correlation(kept[a], kept[b]));
      rep.statistics["corr_" + std::to_string(a) + std::to_string(b)] = corr;
      max_corr = std::max(max_corr, corr);
    }
  }
  rep.statistics["max_abs_corr"] = max_corr;
  rep.statistics["rejected"] = rejected_count;
  rep.pass = max_corr < threshold && rejected_count == 0;
  if (keep_samples) {
    for (int c = 0; c < kCoefficients; ++c) {
      rep.dump["c" + std::to_string(c) + "_sq"] = std::move(kept[c]);
    }
  }
  return rep;
}

SampleReport trace_convergence(int rank, const std::vector<Word>& g_list,
                               const std::vector<int>& n_list, int samples,
                               std::uint64_t seed, double cap) {
  if (g_list.empty() || n_list.size() < 2 || samples < 1) {
    throw InvalidSpecError(
        "the trace check needs words, at least two dimensions, and samples");
  }
  for (const Word& g : g_list) {
    if (g.is_identity()) {
      throw InvalidSpecError(
          "the normalized trace at the identity is constant; drop e");
    }
  }

  SampleReport rep;
  rep.test = "trace";
  rep.samples = samples;
  rep.seed = seed;
  rep.threshold = cap;
  const int n_min = *std::min_element(n_list.begin(), n_list.end());
  const int n_max = *std::max_element(n_list.begin(), n_list.end());
  rep.n = n_max;

  std::map<std::string, std::map<int, double>> means;
  for (std::size_t phase = 0; phase < n_list.size(); ++phase) {
    const int n = n_list[phase];
    std::vector<std::vector<double>> traces(
        g_list.size(), std::vector<double>(samples, 0.0));
    rng::parallel_for(samples, [&](int i) {
      rng::Philox gen(seed, stream_id(phase, i));
      const RandomRepresentation rep_i = sample_representation(rank, n, gen);
      for (std::size_t j = 0; j < g_list.size(); ++j) {
        traces[j][i] = std::abs(rep_i.apply(g_list[j]).trace()) / n;
      }
    });
    for (std::size_t j = 0; j < g_list.size(); ++j) {
      const double m = mean_of(traces[j]);
      const std::string name = freegroup::to_string(g_list[j]);
      means[name][n] = m;
      rep.statistics["mean(" + name + ")_n" + std::to_string(n)] = m;
    }
  }

  bool pass = true;
  for (const auto& [name, by_n] : means) {
    const double at_min = by_n.at(n_min), at_max = by_n.at(n_max);
    pass = pass && at_max < at_min && at_max < cap;
  }
  rep.pass = pass;
  return rep;
}

}  // namespace apent::randrep
