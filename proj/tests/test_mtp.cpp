#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "vfdr/error.hpp"
#include "vfdr/mtp.hpp"

using namespace vfdr;

namespace {

std::size_t brute_bh(std::vector<double> p, double alpha) {
  std::sort(p.begin(), p.end());
  const double m = static_cast<double>(p.size());
  std::size_t k = 0;
  for (std::size_t i = 1; i <= p.size(); ++i) {
    if (p[i - 1] <= static_cast<double>(i) * alpha / m) k = i;
  }
  return k;
}

std::vector<double> random_pvalues(std::mt19937_64& rng) {
  const std::size_t m = 1 + rng() % 1000;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double signal = u(rng);
  std::vector<double> p(m);
  for (auto& v : p) v = u(rng) < signal ? std::pow(u(rng), 8.0) : u(rng);
  return p;
}

CombinedRecord with_left_fdr(std::optional<double> v) {
  CombinedRecord r;
  r.left_fdr = v;
  return r;
}

}  // namespace

TEST_CASE("worked example") {
  const std::vector<double> p{0.001, 0.012, 0.014, 0.2};
  const auto bh = bh_reject(p, 0.05);
  CHECK(bh.k == 3);
  CHECK(bh.rejected == std::vector<std::size_t>{0, 1, 2});
  CHECK(bh.rule == Rule::BenjaminiHochberg);
  CHECK(bh.level == 0.05);
  CHECK(spacings_bh(p, 0.05).k == 3);
}

TEST_CASE("degenerate inputs") {
  CHECK(bh_reject(std::vector<double>(50, 1.0), 0.05).k == 0);
  CHECK(spacings_bh(std::vector<double>(50, 1.0), 0.05).k == 0);
  const std::vector<double> tiny(20, 0.05 / 20);
  CHECK(bh_reject(tiny, 0.05).k == 20);
  const std::vector<double> zeros{0.0, 0.0, 0.5};
  CHECK(bh_reject(zeros, 0.05).k == 2);
  CHECK(bh_reject(std::vector<double>{}, 0.05).k == 0);
  CHECK_THROWS_AS(bh_reject(std::vector<double>{0.1, 1.5}, 0.05), Error);
  CHECK_THROWS_AS(spacings_bh(std::vector<double>{-0.1}, 0.05), Error);
  CHECK_THROWS_AS(bh_reject(std::vector<double>{0.1}, 1.5), Error);
}

TEST_CASE("bh matches a brute-force scan; spacings never rejects more") {
  std::mt19937_64 rng(123);
  for (int t = 0; t < 500; ++t) {
    const auto p = random_pvalues(rng);
    const auto bh = bh_reject(p, 0.05);
    const auto sp = spacings_bh(p, 0.05);
    CHECK(bh.k == brute_bh(p, 0.05));
    CHECK(bh.rejected.size() == bh.k);
    CHECK(sp.k <= bh.k);
  }
}

TEST_CASE("step-up consistency and monotonicity in alpha") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 200; ++t) {
    const auto p = random_pvalues(rng);
    const auto d = bh_reject(p, 0.1);
    std::vector<bool> rejected(p.size(), false);
    double max_rejected = -1.0;
    for (auto i : d.rejected) {
      rejected[i] = true;
      max_rejected = std::max(max_rejected, p[i]);
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!rejected[i]) CHECK(p[i] >= max_rejected);
    }
    CHECK(bh_reject(p, 0.01).k <= bh_reject(p, 0.05).k);
    CHECK(bh_reject(p, 0.05).k <= d.k);
    CHECK(spacings_bh(p, 0.01).k <= spacings_bh(p, 0.05).k);
  }
}

TEST_CASE("ties are ordered by input index") {
  const std::vector<double> p{0.01, 0.001, 0.01, 0.001};
  CHECK(bh_reject(p, 0.05).rejected == std::vector<std::size_t>{1, 3, 0, 2});
}

TEST_CASE("left-tail FDR thresholding") {
  std::vector<CombinedRecord> recs{with_left_fdr(0.01), with_left_fdr(0.04), with_left_fdr(0.6)};
  const auto d = leftfdr_reject(recs, 0.05);
  CHECK(d.k == 2);
  CHECK(d.rule == Rule::LeftTailFdr);
  CHECK(d.rejected == std::vector<std::size_t>{0, 1});

  std::vector<CombinedRecord> ones(5, with_left_fdr(1.0));
  CHECK(leftfdr_reject(ones, 0.05).k == 0);
  std::vector<CombinedRecord> at_cutoff{with_left_fdr(0.05)};
  CHECK(leftfdr_reject(at_cutoff, 0.05).k == 0);

  recs.push_back(with_left_fdr(std::nullopt));
  try {
    leftfdr_reject(recs, 0.05);
    FAIL("expected MissingEstimates");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingEstimates);
  }
}
