#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "apent/errors.hpp"
#include "apent/freegroup.hpp"
#include "apent/matent.hpp"
#include "apent/pdf.hpp"
#include "apent/rng.hpp"

namespace apent::randrep {

// Residual allowed on unitarity and on the Toeplitz symmetry of orbit grams.
inline constexpr double kUnitaryTol = 1e-10;

// A representation of the free group: one Haar-random unitary per generator.
struct RandomRepresentation {
  int n = 0;
  std::vector<matent::Matrix> generators;

  int rank() const { return static_cast<int>(generators.size()); }
  // pi(g): the product of generator matrices along the letters of g, with
  // adjoints at inverse letters.
  matent::Matrix apply(const freegroup::Word& g) const;
};

// Haar-distributed unitary: QR of a complex Ginibre matrix with the Q columns
// rescaled by the phases of R's diagonal (plain QR is not Haar).
matent::Matrix haar_unitary(int n, rng::Philox& gen);

// One independent Haar unitary per generator, drawn in order from `gen`.
RandomRepresentation sample_representation(int rank, int n, rng::Philox& gen);

// The orbit gram Q(g,h) = V* pi(g)^{-1} pi(h) V over F, where V is the frame
// of the first k standard basis columns.  Diagonal blocks are I_k and the
// translation symmetry holds to rounding, so the result is a valid partial
// positive definite function.
pdf::PartialPdf orbit_gram(const RandomRepresentation& rep, int k,
                           const freegroup::GroundedSet& f);

// Verblunsky coefficients of the orbit gram along the first m steps of the
// enumeration.  Throws SingularPrefixError on the probability-zero event of
// a singular prefix; callers treat that as sample rejection.
std::vector<matent::Contraction> random_verblunsky(
    const RandomRepresentation& rep, int k, const freegroup::Enumeration& en,
    int m);

// A draw from sigma_{n,l,k}: the first l rows E*V of a Haar k-frame V in
// dimension n.
matent::Contraction sample_sigma(int n, int l, int k, rng::Philox& gen);

// The closed-form density of sigma_{n,l,1} at y in the unit ball of C^l:
// ((n-1)!/(pi^l (n-l-1)!)) (1-|y|^2)^{n-l-1}; zero outside the ball.
double sigma_density_k1(int n, int l, const Eigen::VectorXcd& y);

// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
double ks_statistic(std::vector<double> values,
                    const std::function<double(double)>& cdf);
// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
// Pearson correlation; zero when either sequence is constant.
double correlation(const std::vector<double>& a, const std::vector<double>& b);

// Outcome of one statistical check.  Reports are deterministic functions of
// their arguments: sample i always uses the Philox stream (phase << 32) + i,
// so parallel and serial runs aggregate identically.
struct SampleReport {
  std::string test;
  int n = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  std::map<std::string, double> statistics;
  double threshold = 0.0;
  bool pass = false;
  // Raw sample columns, kept only on request (CSV dumps).
  std::map<std::string, std::vector<double>> dump;
};

// KS test of q = |v|^2, v standard complex Gaussian in C^n, against the
// k=1 Wishart density q^{n-1} e^{-q} / (n-1)!; also checks the mean is n
// within 0.5.
SampleReport test_wishart_k1(int n, int samples, std::uint64_t seed,
                             double threshold = 0.015,
                             bool keep_samples = false);

// KS test of |y| under sigma_{n,1,1} against the radial CDF
// 1 - (1-rho^2)^{n-1}, sampled through the Haar-frame path.
SampleReport test_sigma_radial(int n, int samples, std::uint64_t seed,
                               double threshold = 0.015,
                               bool keep_samples = false);

// Analytic check of the tail exponent of sigma_{n,1,1}: quadrature of the
// closed-form density gives P(|y| >= c), and (1/n) log P must be within
// 5 log(n)/n of log(1-c^2); the quadrature is also compared with the exact
// tail (1-c^2)^{n-1}.  No sampling.
SampleReport ldp_rate_check(const std::vector<int>& n_values, double c);

// Draws random representations, extracts the coefficient of the enlargement
// F -> F + g, and two-sample-compares (coefficient norm and the real part of
// the first entry) against direct draws from
// sigma_{n - k|F overlap tF|, k|F minus tF|, k}.  Also checks that no prefix
// was singular and that the coefficient norm is uncorrelated with
// log det Q_(F).
SampleReport test_dil_dist(int n, int k, const freegroup::GroundedSet& f,
                           const freegroup::Word& g, int samples,
                           std::uint64_t seed, double threshold = 0.04,
                           bool keep_samples = false);

// Independence of the first four squared coefficient norms along the
// standard rank-two enumeration: all pairwise correlations must stay below
// the threshold.
SampleReport test_kilnen(int n, int samples, std::uint64_t seed,
                         double threshold = 0.05, bool keep_samples = false);

// Empirical means of |tr pi(g)| / n over the given dimensions: the largest
// dimension must beat the smallest and stay under the cap for every word.
SampleReport trace_convergence(int rank,
                               const std::vector<freegroup::Word>& g_list,
                               const std::vector<int>& n_list, int samples,
                               std::uint64_t seed, double cap = 0.3);

}  // namespace apent::randrep
