#include "vfdr/empnull.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "vfdr/error.hpp"
#include "vfdr/normal.hpp"

namespace vfdr::empnull {

namespace {

constexpr const char* kModule = "empnull";
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kRescueAttempts = 3;
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

double log_sum_exp(std::span<const double> v) {
  const double mx = *std::max_element(v.begin(), v.end());
  if (mx == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

// Type-7 (linear interpolation) sample quantile of sorted data.
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct Params {
  std::vector<double> weights;
  std::vector<double> means;
  std::vector<double> scales;
};

// Exact M-step for the scales under sigma_j >= sigma_0 (j > 0) and the floor:
// the binding components share the pooled variance with component 0.
void update_scales(Params& p, std::span<const double> counts, std::span<const double> sq_dev) {
  const std::size_t J = p.scales.size();
  std::vector<std::size_t> alt(J - 1);
  std::iota(alt.begin(), alt.end(), std::size_t{1});
  std::vector<double> var(J, 0.0);
  for (std::size_t j = 0; j < J; ++j) var[j] = counts[j] > 0.0 ? sq_dev[j] / counts[j] : 0.0;
  std::sort(alt.begin(), alt.end(), [&](std::size_t a, std::size_t b) { return var[a] < var[b]; });

  double pooled_n = counts[0];
  double pooled_s = sq_dev[0];
  double pooled = pooled_n > 0.0 ? pooled_s / pooled_n : 0.0;
  std::vector<bool> bound(J, false);
  for (std::size_t j : alt) {
    if (counts[j] <= 0.0) {
      bound[j] = true;
      continue;
    }
    if (var[j] >= pooled) break;
    bound[j] = true;
    pooled_n += counts[j];
    pooled_s += sq_dev[j];
    pooled = pooled_s / pooled_n;
  }
  const double floor_var = kMinScale * kMinScale;
  p.scales[0] = std::sqrt(std::max(pooled, floor_var));
  for (std::size_t j = 1; j < J; ++j) {
    p.scales[j] = bound[j] ? p.scales[0] : std::sqrt(std::max(var[j], floor_var));
  }
}

struct EmResult {
  Params params;
  double log_likelihood = 0.0;
  double penalized = 0.0;
  int iterations = 0;
  bool converged = false;
  bool monotone = true;
};

EmResult run_em(std::span<const double> z, Params p, double penalty) {
  const std::size_t n = z.size();
  const std::size_t J = p.weights.size();
  std::vector<double> resp(n * J);
  std::vector<double> logd(J);
  std::vector<double> counts(J);
  std::vector<double> sums(J);
  std::vector<double> sq_dev(J);

  EmResult out;
  double prev = kNegInf;
  for (int iter = 1;; ++iter) {
    // E-step.
    std::vector<double> log_w(J), log_norm(J);
    for (std::size_t j = 0; j < J; ++j) {
      log_w[j] = p.weights[j] > 0.0 ? std::log(p.weights[j]) : kNegInf;
      log_norm[j] = -std::log(p.scales[j]) - kLogSqrt2Pi;
    }
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < J; ++j) {
        const double u = (z[i] - p.means[j]) / p.scales[j];
        logd[j] = log_w[j] + log_norm[j] - 0.5 * u * u;
      }
      const double total = log_sum_exp(logd);
      ll += total;
      for (std::size_t j = 0; j < J; ++j) {
        resp[i * J + j] = total == kNegInf ? (j == 0 ? 1.0 : 0.0) : std::exp(logd[j] - total);
      }
    }
    const double penalized = ll + (penalty > 0.0 ? penalty * log_w[0] : 0.0);

    if (iter > 1 && penalized < prev - 1e-9 * std::abs(prev)) out.monotone = false;
    assert(iter == 1 || penalized >= prev - 1e-9 * std::abs(prev));

    out.log_likelihood = ll;
    out.penalized = penalized;
    out.iterations = iter;
    if (iter > 1 && std::abs(penalized - prev) < kRelativeTolerance * std::abs(prev)) {
      out.converged = true;
      break;
    }
    if (iter >= kMaxIterations || !std::isfinite(penalized)) break;
    prev = penalized;

    // M-step.
    std::fill(counts.begin(), counts.end(), 0.0);
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < J; ++j) {
        counts[j] += resp[i * J + j];
        sums[j] += resp[i * J + j] * z[i];
      }
    }
    const double denom = static_cast<double>(n) + penalty;
    for (std::size_t j = 0; j < J; ++j) {
      p.weights[j] = (counts[j] + (j == 0 ? penalty : 0.0)) / denom;
      if (counts[j] > 0.0) p.means[j] = sums[j] / counts[j];
    }
    std::fill(sq_dev.begin(), sq_dev.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < J; ++j) {
        const double d = z[i] - p.means[j];
        sq_dev[j] += resp[i * J + j] * d * d;
      }
    }
    update_scales(p, counts, sq_dev);
  }
  out.params = std::move(p);
  return out;
}

bool collapsed(const EmResult& r) {
  if (!std::isfinite(r.penalized)) return true;
  return r.params.scales[0] <= kMinScale * (1.0 + 1e-12);
}

std::size_t designate_null(const Params& p) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < p.weights.size(); ++j) {
    const double dw = p.weights[j] - p.weights[best];
    if (dw > 1e-12 || (std::abs(dw) <= 1e-12 && std::abs(p.means[j]) < std::abs(p.means[best]))) {
      best = j;
    }
  }
  return best;
}

}  // namespace

MixtureFit fit_mixture(std::span<const double> z, int components, double penalty, std::uint64_t seed) {
  if (components != 2 && components != 3) {
    throw Error(ErrorKind::InvalidConfig, kModule,
                "number of mixture components must be 2 or 3, got " + std::to_string(components));
  }
  if (!(penalty >= 0.0) || !std::isfinite(penalty)) {
    throw Error(ErrorKind::InvalidConfig, kModule, "penalty must be finite and >= 0");
  }
  if (z.size() < kMinPoints) {
    throw Error(ErrorKind::TooFewPoints, kModule,
                "mixture fitting needs at least " + std::to_string(kMinPoints) + " values, got " +
                    std::to_string(z.size()));
  }
  for (double v : z) {
    if (!std::isfinite(v)) throw Error(ErrorKind::OutOfDomain, kModule, "non-finite z value");
  }

  const std::size_t J = static_cast<std::size_t>(components);
  std::vector<double> sorted(z.begin(), z.end());
  std::sort(sorted.begin(), sorted.end());
  const double mean = std::accumulate(z.begin(), z.end(), 0.0) / static_cast<double>(z.size());
  double ss = 0.0;
  for (double v : z) ss += (v - mean) * (v - mean);
  const double sd = std::max(std::sqrt(ss / static_cast<double>(z.size() - 1)), kMinScale);

  static constexpr double kInitQuantiles[3] = {0.5, 0.1, 0.9};
  Params init;
  for (std::size_t j = 0; j < J; ++j) {
    init.weights.push_back(1.0 / static_cast<double>(J));
    init.means.push_back(quantile_sorted(sorted, kInitQuantiles[j]));
    init.scales.push_back(sd);
  }

  EmResult result = run_em(z, init, penalty);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, 0.5 * sd);
  for (int attempt = 0; attempt < kRescueAttempts && collapsed(result); ++attempt) {
    Params retry = init;
    for (auto& m : retry.means) m += jitter(rng);
    result = run_em(z, retry, penalty);
  }
  if (collapsed(result)) {
    throw Error(ErrorKind::DegenerateFit, kModule,
                "null component collapsed onto the scale floor after " +
                    std::to_string(kRescueAttempts) + " re-initialisations");
  }

  MixtureFit fit;
  fit.weights = std::move(result.params.weights);
  fit.means = std::move(result.params.means);
  fit.scales = std::move(result.params.scales);
  fit.penalty = penalty;
  fit.log_likelihood = result.log_likelihood;
  fit.penalized_log_likelihood = result.penalized;
  fit.iterations = result.iterations;
  fit.converged = result.converged;
  fit.monotone = result.monotone;
  fit.null_index = designate_null({fit.weights, fit.means, fit.scales});
  return fit;
}

double local_fdr(const MixtureFit& fit, double z) {
  std::vector<double> terms(fit.components());
  for (std::size_t j = 0; j < fit.components(); ++j) {
    const double u = (z - fit.means[j]) / fit.scales[j];
    terms[j] = fit.weights[j] > 0.0
                   ? std::log(fit.weights[j]) - std::log(fit.scales[j]) - kLogSqrt2Pi - 0.5 * u * u
                   : kNegInf;
  }
  const double total = log_sum_exp(terms);
  if (total == kNegInf) return 1.0;
  return std::clamp(std::exp(terms[fit.null_index] - total), 0.0, 1.0);
}

double left_tail_fdr(const MixtureFit& fit, double z) {
  std::vector<double> terms(fit.components());
  for (std::size_t j = 0; j < fit.components(); ++j) {
    terms[j] = fit.weights[j] > 0.0
                   ? std::log(fit.weights[j]) + normal::log_cdf((z - fit.means[j]) / fit.scales[j])
                   : kNegInf;
  }
  const double total = log_sum_exp(terms);
  if (total == kNegInf) return 1.0;
  return std::clamp(std::exp(terms[fit.null_index] - total), 0.0, 1.0);
}

}  // namespace vfdr::empnull
