#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "vfdr/error.hpp"
#include "vfdr/normal.hpp"
#include "vfdr/simulate.hpp"

using namespace vfdr;
using namespace vfdr::simulate;

namespace {

double correlation(const Statistics& s, std::size_t a, std::size_t b) {
  const double n = static_cast<double>(s.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    ma += s.at(i, a);
    mb += s.at(i, b);
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double x = s.at(i, a) - ma, y = s.at(i, b) - mb;
    sab += x * y;
    saa += x * x;
    sbb += y * y;
  }
  return sab / std::sqrt(saa * sbb);
}

// KS distance of a sample from Uniform(0, hi).
double ks_uniform(std::vector<double> x, double hi = 1.0) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = x[i] / hi;
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

StudyConfig small(std::size_t m = 400, std::size_t reps = 6) {
  StudyConfig cfg;
  cfg.m = m;
  cfg.reps = reps;
  cfg.mu_alt = 3.0;
  return cfg;
}

std::string csv_of(const StudyResult& r) {
  std::ostringstream out;
  write_study_csv(r, out);
  return out.str();
}

}  // namespace

TEST_CASE("sample correlation matches rho") {
  auto cfg = small(20000);
  cfg.mu_alt = 0.0;
  for (double rho : {0.0, 0.4, 0.7}) {
    const auto s = gen_statistics(cfg, rho, 3);
    // SE of a sample correlation is about (1 - rho^2) / sqrt(n)
    const double se = (1 - rho * rho) / std::sqrt(static_cast<double>(cfg.m));
    CHECK(std::abs(correlation(s, 0, 1) - rho) < 3 * se);
  }
  cfg.dims = 3;
  const auto s3 = gen_statistics(cfg, 0.5, 1);
  const double se = 0.75 / std::sqrt(static_cast<double>(cfg.m));
  CHECK(std::abs(correlation(s3, 0, 1) - 0.5) < 3 * se);
  CHECK(std::abs(correlation(s3, 0, 2) - 0.5) < 3 * se);
  CHECK(std::abs(correlation(s3, 1, 2) - 0.5) < 3 * se);
}

TEST_CASE("alternative rows and truth flags") {
  StudyConfig cfg;
  const auto s = gen_statistics(cfg, 0.0, 0);
  CHECK(std::count(s.truth.begin(), s.truth.end(), true) == 200);
  for (std::size_t i = 0; i < 200; ++i) CHECK(s.truth[i]);

  cfg.mixed_frac = 0.1;
  cfg.mu_alt = 50.0;
  const auto mixed = gen_statistics(cfg, 0.0, 0);
  CHECK(std::count(mixed.kind.begin(), mixed.kind.end(), 'x') == 200);
  CHECK(std::count(mixed.truth.begin(), mixed.truth.end(), true) == 200);
  for (std::size_t i = 200; i < 400; ++i) {
    CHECK(!mixed.truth[i]);
    const std::size_t null_k = (i - 200) % 2;
    CHECK(std::abs(mixed.at(i, null_k)) < 10.0);
    CHECK(mixed.at(i, 1 - null_k) > 40.0);
  }
}

TEST_CASE("replicates are deterministic and distinct") {
  const auto cfg = small();
  const auto a = gen_statistics(cfg, 0.3, 2);
  const auto b = gen_statistics(cfg, 0.3, 2);
  CHECK(a.values == b.values);
  CHECK(gen_statistics(cfg, 0.3, 3).values != a.values);
  std::set<std::uint64_t> seeds;
  for (std::size_t r = 0; r < 1000; ++r) seeds.insert(replicate_seed(1, r));
  CHECK(seeds.size() == 1000);
}

TEST_CASE("p-value conventions") {
  CHECK(statistic_to_pvalue(0.0, PValueConvention::TwoSided) == 1.0);
  CHECK(std::abs(statistic_to_pvalue(1.959964, PValueConvention::TwoSided) - 0.05) < 1e-4);
  CHECK(std::abs(statistic_to_pvalue(-1.959964, PValueConvention::TwoSided) - 0.05) < 1e-4);
  CHECK(statistic_to_pvalue(40.0, PValueConvention::TwoSided) == kPValueFloor);
  CHECK(statistic_to_pvalue(0.0, PValueConvention::PaperLiteral) == 0.5);

  auto cfg = small(5000);
  cfg.frac_alt = 0.0;
  const auto stats = gen_statistics(cfg, 0.0, 9);
  const double critical = 1.628 / std::sqrt(5000.0);
  for (auto conv : {PValueConvention::TwoSided, PValueConvention::PaperLiteral}) {
    const auto ps = to_pvectors(stats, conv);
    const double hi = conv == PValueConvention::TwoSided ? 1.0 : 0.5;
    for (std::size_t k = 0; k < 2; ++k) {
      std::vector<double> col;
      for (const auto& p : ps) col.push_back(p.coords[k]);
      CHECK(ks_uniform(col, hi) < critical);
    }
  }
  CHECK(to_pvectors(gen_statistics(small(), 0.0, 0), PValueConvention::TwoSided)[0].id == "alt_0");
}

TEST_CASE("evaluate tallies outcome counts") {
  std::vector<bool> truth{true, true, false, false, false};
  DecisionSet none;
  auto c = evaluate(none, truth);
  CHECK(c.V == 0);
  CHECK(c.S == 0);
  CHECK(c.false_discovery_proportion() == 0.0);
  CHECK(c.true_discovery_fraction() == 0.0);

  DecisionSet exact;
  exact.rejected = {1, 0};
  c = evaluate(exact, truth);
  CHECK(c.V == 0);
  CHECK(c.S == 2);
  CHECK(c.false_discovery_proportion() == 0.0);
  CHECK(c.true_discovery_fraction() == 1.0);

  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    std::vector<bool> tr(50);
    DecisionSet d;
    std::size_t U = 0, V = 0, T = 0, S = 0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      tr[i] = rng() % 3 == 0;
      const bool rej = rng() % 2 == 0;
      if (rej) d.rejected.push_back(i);
      (tr[i] ? (rej ? S : T) : (rej ? V : U))++;
    }
    const auto got = evaluate(d, tr);
    CHECK(got.U == U);
    CHECK(got.V == V);
    CHECK(got.T == T);
    CHECK(got.S == S);
    CHECK(got.U + got.V == got.m0);
    CHECK(got.T + got.S == got.m - got.m0);
    CHECK(got.V + got.S == got.R);
  }

  DecisionSet bad;
  bad.rejected = {7};
  CHECK_THROWS_AS(evaluate(bad, truth), Error);
}

TEST_CASE("aggregated FDR is the mean of per-replicate V / max(R, 1)") {
  auto cfg = small(300, 5);
  cfg.schemes = {OrderingScheme::Summation};
  cfg.methods = {Method::BH, Method::MaxBH, Method::SpacingsBH};
  const auto result = run_study(cfg);
  const auto arms = study_arms(cfg);
  REQUIRE(result.rows.size() == arms.size());
  for (std::size_t a = 0; a < arms.size(); ++a) {
    double fdr = 0.0, power = 0.0;
    for (std::size_t r = 0; r < cfg.reps; ++r) {
      const auto c = run_replicate(cfg, 0.0, r)[a];
      fdr += static_cast<double>(c.V) / static_cast<double>(std::max<std::size_t>(c.R, 1));
      power += static_cast<double>(c.S) / static_cast<double>(c.S + c.T);
    }
    const auto* row = result.find(arms[a].scheme, arms[a].method, 0.0);
    REQUIRE(row);
    CHECK(row->fdr == doctest::Approx(fdr / 5).epsilon(1e-12));
    CHECK(row->power == doctest::Approx(power / 5).epsilon(1e-12));
    CHECK(row->reps == 5);
  }
}

TEST_CASE("study output does not depend on thread count") {
  auto cfg = small(300, 8);
  cfg.rhos = {0.0, 0.5};
  cfg.methods = {Method::BH, Method::EmpiricalNull, Method::MaxBH};
  cfg.threads = 1;
  const auto serial = csv_of(run_study(cfg));
  cfg.threads = 4;
  CHECK(csv_of(run_study(cfg)) == serial);
  cfg.threads = 3;
  CHECK(csv_of(run_study(cfg)) == serial);
}

TEST_CASE("csv layout") {
  auto cfg = small(200, 2);
  cfg.schemes = {OrderingScheme::Euclidean};
  const auto text = csv_of(run_study(cfg));
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "scheme,method,rho,muA,fdr,fdr_se,power,power_se,reps");
  std::getline(in, line);
  CHECK(line.rfind("euclidean,bh,0,3,", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("none,max-bh,0,3,", 0) == 0);
}

TEST_CASE("configuration validation") {
  auto bad = [](auto mutate) {
    StudyConfig cfg;
    mutate(cfg);
    try {
      validate(cfg);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::EmptyInput;
  };
  CHECK(bad([](StudyConfig& c) { c.frac_alt = 1.2; }) == ErrorKind::InvalidConfig);
  CHECK(bad([](StudyConfig& c) { c.rhos = {1.0}; }) == ErrorKind::InvalidConfig);
  CHECK(bad([](StudyConfig& c) { c.reps = 0; }) == ErrorKind::InvalidConfig);
  CHECK(bad([](StudyConfig& c) { c.dims = 4; }) == ErrorKind::InvalidConfig);
  CHECK(bad([](StudyConfig& c) { c.dims = 3; }) == ErrorKind::UnsupportedScheme);
  CHECK(bad([](StudyConfig& c) { c.null_components = 5; }) == ErrorKind::InvalidConfig);
  CHECK(bad([](StudyConfig&) {}) == ErrorKind::EmptyInput);
  for (auto m : {Method::BH, Method::SpacingsBH, Method::EmpiricalNull, Method::MaxBH}) {
    CHECK(parse_method(to_string(m)) == m);
  }
}
