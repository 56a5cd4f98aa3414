#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace vfdr::periodicity {

/// Expression measurements of one gene at evenly spaced time points.
struct TimeCourse {
  std::string id;
  std::vector<double> values;
  double spacing_minutes = 0.0;  // metadata only
};

struct GResult {
  double g = 0.0;
  double p_value = 1.0;
  std::size_t ordinates = 0;
};

inline constexpr std::size_t kMinLength = 4;

/// Periodogram ordinates I(w_k) = |sum_t x_t exp(-i w_k t)|^2 / n of the
/// mean-centred series at the Fourier frequencies w_k = 2 pi k / n,
/// k = 1 .. floor((n - 1) / 2).
std::vector<double> periodogram(std::span<const double> series);

/// Exact null tail P(G > g) for q ordinates:
///   sum_{j=1}^{floor(1/g)} (-1)^(j-1) C(q, j) (1 - j g)^(q-1),
/// summed in extended precision, descending magnitude, with compensation and
/// clamped to [0, 1]. Absolute error is around 1e-10. Once a term exceeds 1e6
/// the cancellation is unresolvable but the tail is already within 1e-8 of 1
/// (for q <= 5000), so 1 is returned.
double fisher_g_pvalue(double g, std::size_t q);

/// Fisher's G = max ordinate / sum of ordinates, with its exact p-value.
/// Throws TooShort (n < 4), OutOfDomain (non-finite value) and ConstantSeries.
GResult fisher_g(const TimeCourse& series);

}  // namespace vfdr::periodicity
