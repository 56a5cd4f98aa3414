#pragma once

// Standard normal distribution functions used throughout the pipeline.

namespace vfdr::normal {

double pdf(double x);

/// P(Z <= x); accurate to ~1e-16 absolute via erfc.
double cdf(double x);

/// P(Z > x), computed without cancellation for large x.
double upper_tail(double x);

/// log P(Z <= x), finite for every finite x.
double log_cdf(double x);

/// Inverse of cdf on (0, 1) (Wichura's AS241). Returns -inf / +inf at 0 / 1.
double quantile(double p);

}  // namespace vfdr::normal
