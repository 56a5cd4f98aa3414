#include "vfdr/periodicity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "vfdr/error.hpp"

namespace vfdr::periodicity {

namespace {

constexpr const char* kModule = "periodicity";

// Beyond this the alternating sum cannot resolve 1 - p, which is then below 1e-8.
constexpr long double kMaxTerm = 1e6L;

long double neumaier_sum(std::span<const long double> values) {
  long double sum = 0.0L;
  long double compensation = 0.0L;
  for (long double v : values) {
    const long double t = sum + v;
    compensation += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + compensation;
}

}  // namespace

std::vector<double> periodogram(std::span<const double> series) {
  const std::size_t n = series.size();
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  std::vector<double> cos_table(n), sin_table(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
    cos_table[r] = std::cos(angle);
    sin_table[r] = std::sin(angle);
  }
  const std::size_t q = (n - 1) / 2;
  std::vector<double> ordinates(q);
  for (std::size_t k = 1; k <= q; ++k) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t r = (k * t) % n;
      const double x = series[t] - mean;
      re += x * cos_table[r];
      im -= x * sin_table[r];
    }
    ordinates[k - 1] = (re * re + im * im) / static_cast<double>(n);
  }
  return ordinates;
}

double fisher_g_pvalue(double g, std::size_t q) {
  if (q == 0 || !(g > 0.0)) return 1.0;
  // G >= 1/q always, so the tail is certain up to there.
  if (g * static_cast<double>(q) <= 1.0) return 1.0;
  if (g >= 1.0) return 0.0;

  const std::size_t upper = std::min(q, static_cast<std::size_t>(std::floor(1.0 / g)));
  const long double exponent = static_cast<long double>(q - 1);
  const long double qd = static_cast<long double>(q);
  const long double gl = g;
  std::vector<long double> terms;
  terms.reserve(upper);
  long double log_binom = 0.0L;
  for (std::size_t j = 1; j <= upper; ++j) {
    const long double jd = static_cast<long double>(j);
    log_binom += std::log((qd - jd + 1.0L) / jd);
    const long double base = 1.0L - jd * gl;
    if (base <= 0.0L) break;
    const long double magnitude = std::exp(log_binom + exponent * std::log(base));
    if (magnitude > kMaxTerm) return 1.0;
    terms.push_back(j % 2 == 1 ? magnitude : -magnitude);
  }
  std::sort(terms.begin(), terms.end(), [](long double x, long double y) { return std::abs(x) > std::abs(y); });
  return std::clamp(static_cast<double>(neumaier_sum(terms)), 0.0, 1.0);
}

GResult fisher_g(const TimeCourse& series) {
  const auto& x = series.values;
  if (x.size() < kMinLength) {
    throw Error(ErrorKind::TooShort, kModule,
                "'" + series.id + "' has " + std::to_string(x.size()) + " time points, need at least " +
                    std::to_string(kMinLength));
  }
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::OutOfDomain, kModule, "'" + series.id + "' contains a missing or non-finite value");
    }
  }
  const auto ordinates = periodogram(x);
  const double total = std::accumulate(ordinates.begin(), ordinates.end(), 0.0);
  const double peak = *std::max_element(ordinates.begin(), ordinates.end());
  const double scale = std::accumulate(x.begin(), x.end(), 0.0,
                                       [](double acc, double v) { return std::max(acc, std::abs(v)); });
  // Ordinates of a constant series are pure rounding noise.
  if (!(total > 0.0) || total <= 1e-24 * std::max(1.0, scale * scale) * static_cast<double>(x.size())) {
    throw Error(ErrorKind::ConstantSeries, kModule, "'" + series.id + "' has no variation at Fourier frequencies");
  }
  GResult r;
  r.ordinates = ordinates.size();
  r.g = std::min(peak / total, 1.0);
  r.p_value = fisher_g_pvalue(r.g, r.ordinates);
  return r;
}

}  // namespace vfdr::periodicity
