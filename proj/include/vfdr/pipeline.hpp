#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vfdr/geometry.hpp"
#include "vfdr/ordering.hpp"
#include "vfdr/pvector.hpp"

namespace vfdr {

/// Per-hypothesis result of Voronoi p-value combination. `cumulative` is the
/// combined p-value surrogate T and `z` its probit.
struct CombinedRecord {
  std::string id;
  std::size_t input_index = 0;
  std::vector<double> coords;
  std::size_t rank = 0;  // 1-based
  double area = 0.0;
  double cumulative = 0.0;
  double z = 0.0;
  std::optional<double> fdr;
  std::optional<double> left_fdr;
  bool reject = false;
};

/// Tolerance on the unit-sum of areas.
inline constexpr double kAreaSumTolerance = 1e-9;
/// T is clamped into [eps, 1 - eps] before the probit.
inline constexpr double kProbitClamp = 1e-12;

/// Prefix sums of areas given in rank order.
std::vector<double> cumulative_areas(std::span<const double> areas_in_rank_order);

/// Z = Phi^{-1}(clamp(T, 1e-12, 1 - 1e-12)).
std::vector<double> probit_transform(std::span<const double> cumulative);

/// Rank, cumulate and probit given per-input areas (indexed by input order).
/// Shared by the 2D and pairwise-average 3D paths.
std::vector<CombinedRecord> combine_areas(std::span<const PVector> ps, std::span<const double> areas,
                                          OrderingScheme scheme);

/// rank -> tessellate -> cumulate -> probit. Records are returned in rank order.
std::vector<CombinedRecord> combine(std::span<const PVector> ps, OrderingScheme scheme,
                                    const geometry::TessellateOptions& options = {});

}  // namespace vfdr
