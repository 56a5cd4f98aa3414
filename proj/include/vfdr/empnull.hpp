#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace vfdr::empnull {

inline constexpr double kMinScale = 1e-3;
inline constexpr int kMaxIterations = 1000;
inline constexpr double kRelativeTolerance = 1e-8;
inline constexpr std::size_t kMinPoints = 50;

/// Penalised Gaussian mixture fitted to probit-transformed combined
/// p-values. Component `null_index` plays the role of the empirical null f0.
struct MixtureFit {
  std::vector<double> weights;
  std::vector<double> means;
  std::vector<double> scales;
  std::size_t null_index = 0;
  double penalty = 0.0;
  double log_likelihood = 0.0;            // unpenalised, at the returned parameters
  double penalized_log_likelihood = 0.0;  // + penalty * log(weight of component 0)
  int iterations = 0;
  bool converged = false;
  /// Penalised likelihood never decreased between iterations.
  bool monotone = true;

  std::size_t components() const noexcept { return weights.size(); }
  double null_weight() const { return weights[null_index]; }
};

/// Penalised EM for a J-component normal mixture (J in {2,3}).
///
/// The penalty P acts as a pseudo-count on component 0, which starts at the
/// data median; a larger P favours a larger null group. Non-null components
/// are constrained to be at least as wide as component 0, and every scale is
/// floored at kMinScale. Initial means sit at the 50%, 10% (and 90%)
/// quantiles, scales at the sample standard deviation, weights uniform.
/// Iterates until the relative change of the penalised log-likelihood drops
/// below 1e-8 or 1000 iterations. `seed` only drives the re-initialisations
/// tried when the null scale collapses onto the floor.
///
/// Throws TooFewPoints (|z| < 50), InvalidConfig (bad J or P) and
/// DegenerateFit.
MixtureFit fit_mixture(std::span<const double> z, int components, double penalty, std::uint64_t seed);

/// Posterior null probability pi0 f0(z) / f(z). Returns 1 when f(z) underflows.
double local_fdr(const MixtureFit& fit, double z);

/// pi0 F0(z) / F(z). Returns 1 when F(z) underflows.
double left_tail_fdr(const MixtureFit& fit, double z);

}  // namespace vfdr::empnull
