#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "vfdr/empnull.hpp"
#include "vfdr/error.hpp"
#include "vfdr/normal.hpp"

using namespace vfdr;
using empnull::MixtureFit;

namespace {

std::vector<double> draws(std::size_t n, double alt_frac, double alt_mean, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> z(n);
  const auto n_alt = static_cast<std::size_t>(std::round(alt_frac * static_cast<double>(n)));
  for (std::size_t i = 0; i < n; ++i) z[i] = g(rng) + (i < n_alt ? alt_mean : 0.0);
  return z;
}

MixtureFit manual(std::vector<double> w, std::vector<double> mu, std::vector<double> sd, std::size_t null = 0) {
  MixtureFit f;
  f.weights = std::move(w);
  f.means = std::move(mu);
  f.scales = std::move(sd);
  f.null_index = null;
  return f;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::EmptyInput;
}

void check_invariants(const MixtureFit& f) {
  CHECK(std::accumulate(f.weights.begin(), f.weights.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
  for (double w : f.weights) CHECK(w >= 0.0);
  for (double s : f.scales) CHECK(s >= empnull::kMinScale);
  CHECK(f.monotone);
  for (std::size_t j = 0; j < f.components(); ++j) CHECK(f.weights[f.null_index] >= f.weights[j]);
}

}  // namespace

TEST_CASE("pure null sample recovers N(0, 1)") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto fit = empnull::fit_mixture(draws(5000, 0.0, 0.0, seed), 2, 500, seed);
    check_invariants(fit);
    const auto j = fit.null_index;
    CHECK(std::abs(fit.means[j]) < 0.05);
    CHECK(std::abs(fit.scales[j] - 1.0) < 0.05);
    CHECK(fit.weights[j] > 0.9);
  }
}

TEST_CASE("90/10 mixture recovers both means") {
  for (std::uint64_t seed : {4u, 5u, 6u}) {
    const auto fit = empnull::fit_mixture(draws(5000, 0.1, -3.0, seed), 2, 500, seed);
    check_invariants(fit);
    const auto j = fit.null_index;
    CHECK(std::abs(fit.means[j]) < 0.15);
    CHECK(std::abs(fit.means[1 - j] + 3.0) < 0.15);
    CHECK(fit.converged);
  }
}

TEST_CASE("study penalties and three components are accepted") {
  const auto z = draws(2000, 0.1, -3.0, 9);
  for (double p : {400.0, 800.0, 1000.0}) {
    const auto fit = empnull::fit_mixture(z, 2, p, 1);
    CHECK(fit.penalty == p);
    check_invariants(fit);
  }
  const auto three = empnull::fit_mixture(z, 3, 800, 1);
  CHECK(three.components() == 3);
  check_invariants(three);
}

// With P = 0 two components split N(0,1) data (the split beats one Gaussian in
// likelihood), so individual components are not identified. What reduces to the
// theoretical null is the fitted density: moments within 4 SE, sup|F - Phi| below
// the 1% Kolmogorov bound.
TEST_CASE("unpenalised fit on null data reduces to the theoretical null") {
  constexpr double n = 5000;
  for (std::uint64_t seed : {12u, 13u, 14u}) {
    const auto fit = empnull::fit_mixture(draws(5000, 0.0, 0.0, seed), 2, 0, seed);
    check_invariants(fit);
    double mean = 0.0, var = 0.0;
    for (std::size_t j = 0; j < 2; ++j) mean += fit.weights[j] * fit.means[j];
    for (std::size_t j = 0; j < 2; ++j) {
      const double d = fit.means[j] - mean;
      var += fit.weights[j] * (fit.scales[j] * fit.scales[j] + d * d);
    }
    CHECK(std::abs(mean) < 4.0 / std::sqrt(n));
    CHECK(std::abs(std::sqrt(var) - 1.0) < 4.0 / std::sqrt(2.0 * n));
    double sup = 0.0;
    for (double x = -5.0; x <= 5.0; x += 0.01) {
      double F = 0.0;
      for (std::size_t j = 0; j < 2; ++j) F += fit.weights[j] * normal::cdf((x - fit.means[j]) / fit.scales[j]);
      sup = std::max(sup, std::abs(F - normal::cdf(x)));
    }
    CHECK(sup < 1.628 / std::sqrt(n));
  }
}

TEST_CASE("refits are bitwise deterministic") {
  const auto z = draws(3000, 0.1, -2.5, 21);
  const auto a = empnull::fit_mixture(z, 2, 800, 5);
  const auto b = empnull::fit_mixture(z, 2, 800, 5);
  CHECK(a.weights == b.weights);
  CHECK(a.means == b.means);
  CHECK(a.scales == b.scales);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("argument validation") {
  CHECK(kind_of([] { empnull::fit_mixture(draws(49, 0, 0, 1), 2, 100, 1); }) == ErrorKind::TooFewPoints);
  CHECK(kind_of([] { empnull::fit_mixture(draws(100, 0, 0, 1), 4, 100, 1); }) == ErrorKind::InvalidConfig);
  CHECK(kind_of([] { empnull::fit_mixture(draws(100, 0, 0, 1), 1, 100, 1); }) == ErrorKind::InvalidConfig);
  CHECK(kind_of([] { empnull::fit_mixture(draws(100, 0, 0, 1), 2, -1, 1); }) == ErrorKind::InvalidConfig);
  CHECK(kind_of([] { empnull::fit_mixture(std::vector<double>(100, 0.3), 2, 100, 1); }) == ErrorKind::DegenerateFit);
}

TEST_CASE("local fdr: closed-form cases") {
  const auto only_null = manual({1.0, 0.0}, {0.0, -3.0}, {1.0, 1.0});
  for (double z : {-8.0, -1.0, 0.0, 2.0}) CHECK(empnull::local_fdr(only_null, z) == 1.0);

  const auto equal = manual({0.5, 0.5}, {0.0, -3.0}, {1.0, 1.0});
  CHECK(empnull::local_fdr(equal, -1.5) == doctest::Approx(0.5).epsilon(1e-14));

  const auto f = manual({0.8, 0.2}, {0.1, -2.4}, {1.1, 1.7});
  for (int i = 0; i < 100; ++i) {
    const double z = -6.0 + 0.1 * i;
    const double f0 = 0.8 * normal::pdf((z - 0.1) / 1.1) / 1.1;
    const double f1 = 0.2 * normal::pdf((z + 2.4) / 1.7) / 1.7;
    CHECK(empnull::local_fdr(f, z) == doctest::Approx(f0 / (f0 + f1)).epsilon(1e-12));
    const double F0 = 0.8 * normal::cdf((z - 0.1) / 1.1);
    const double F1 = 0.2 * normal::cdf((z + 2.4) / 1.7);
    CHECK(empnull::left_tail_fdr(f, z) == doctest::Approx(F0 / (F0 + F1)).epsilon(1e-12));
  }
}

TEST_CASE("left-tail FDR: closed-form cases") {
  const auto only_null = manual({1.0, 0.0}, {0.0, -3.0}, {1.0, 1.0});
  CHECK(empnull::left_tail_fdr(only_null, -2.0) == 1.0);

  const auto equal = manual({0.5, 0.5}, {0.0, -3.0}, {1.0, 1.0});
  CHECK(empnull::left_tail_fdr(equal, -1.5) == doctest::Approx(0.066807201268858066).epsilon(1e-12));

  const auto f = manual({0.7, 0.3}, {0.0, -2.0}, {1.0, 1.5});
  CHECK(empnull::left_tail_fdr(f, 40.0) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("estimates stay in [0, 1] including far tails") {
  const auto fit = empnull::fit_mixture(draws(2000, 0.1, -4.0, 31), 2, 800, 31);
  for (double z = -60.0; z <= 60.0; z += 0.5) {
    const double a = empnull::local_fdr(fit, z);
    const double b = empnull::left_tail_fdr(fit, z);
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
    CHECK(b >= 0.0);
    CHECK(b <= 1.0);
  }
}
