#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "apent/rng.hpp"

using apent::rng::Philox;

namespace {

// One-sample Kolmogorov-Smirnov statistic against a CDF.
double ks_statistic(std::vector<double> samples, double (*cdf)(double)) {
  std::sort(samples.begin(), samples.end());
  double worst = 0.0;
  const double n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double f = cdf(samples[i]);
    worst = std::max(worst, std::abs(f - static_cast<double>(i) / n));
    worst = std::max(worst, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return worst;
}

double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("philox blocks match the reference known-answer vectors") {
  // Counter/key all zero.
  auto zero = Philox::block(0, 0, 0);
  CHECK(zero[0] == 0x6627e8d5u);
  CHECK(zero[1] == 0xe169c58du);
  CHECK(zero[2] == 0xbc57ac4cu);
  CHECK(zero[3] == 0x9b00dbd8u);

  // Counter/key all ones.
  auto ones = Philox::block(0xFFFFFFFFFFFFFFFFull, 0xFFFFFFFFFFFFFFFFull,
                            0xFFFFFFFFFFFFFFFFull);
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);

  // Digits-of-pi vector: counter (243f6a88 85a308d3 13198a2e 03707344),
  // key (a4093822 299f31d0).
  auto pi = Philox::block(0x299f31d0a4093822ull, 0x0370734413198a2eull,
                          0x85a308d3243f6a88ull);
  CHECK(pi[0] == 0xd16cfe09u);
  CHECK(pi[1] == 0x94fdccebu);
  CHECK(pi[2] == 0x5001e420u);
  CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("streams are reproducible and distinct") {
  Philox a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  bool c_differs = false, d_differs = false;
  for (int i = 0; i < 64; ++i) {
    std::uint32_t x = a.next_u32();
    CHECK(x == b.next_u32());
    if (x != c.next_u32()) c_differs = true;
    if (x != d.next_u32()) d_differs = true;
  }
  CHECK(c_differs);
  CHECK(d_differs);
}

TEST_CASE("uniform01 looks uniform") {
  Philox gen(2024, 0);
  std::vector<double> samples(10000);
  double mean = 0.0;
  for (double& x : samples) {
    x = gen.uniform01();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    mean += x;
  }
  mean /= samples.size();
  CHECK(std::abs(mean - 0.5) < 0.01);
  CHECK(ks_statistic(samples, uniform_cdf) < 0.02);
}

TEST_CASE("normal variates look standard normal") {
  Philox gen(7, 3);
  std::vector<double> samples(20000);
  double mean = 0.0, second = 0.0;
  for (double& x : samples) {
    x = gen.normal();
    mean += x;
    second += x * x;
  }
  mean /= samples.size();
  second /= samples.size();
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(second - 1.0) < 0.05);
  CHECK(ks_statistic(samples, normal_cdf) < 0.02);
}

TEST_CASE("complex normals have unit second moment and isotropic phase") {
  Philox gen(99, 0);
  double second = 0.0;
  std::complex<double> mean = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    std::complex<double> z = gen.complex_normal();
    second += std::norm(z);
    mean += z;
  }
  CHECK(std::abs(second / n - 1.0) < 0.05);
  CHECK(std::abs(mean) / n < 0.02);
}

TEST_CASE("parallel_for matches a serial run slot for slot") {
  std::vector<double> parallel(1000), serial(1000);
  auto task = [](int i) {
    Philox gen(5, static_cast<std::uint64_t>(i));
    return gen.uniform01() + i;
  };
  apent::rng::parallel_for(1000, [&](int i) { parallel[i] = task(i); });
  for (int i = 0; i < 1000; ++i) serial[i] = task(i);
  CHECK(parallel == serial);
}
