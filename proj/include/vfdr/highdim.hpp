#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "vfdr/geometry.hpp"
#include "vfdr/ordering.hpp"
#include "vfdr/pipeline.hpp"
#include "vfdr/pvector.hpp"

namespace vfdr::highdim {

/// Coordinate pairs (0-based) of the three 2D projections, in order
/// (1,2), (1,3), (2,3).
inline constexpr std::array<std::pair<int, int>, 3> kProjections{{{0, 1}, {0, 2}, {1, 2}}};

/// Cell areas of each input in the three coordinate-pair projections and
/// their per-input mean.
struct PairwiseAreas {
  std::array<std::vector<double>, 3> projections;
  std::vector<double> mean;
  std::size_t jittered = 0;
};

PairwiseAreas pairwise_average_areas(std::span<const PVector> ps,
                                     const geometry::TessellateOptions& options = {});

/// Ranks 3D p-vectors with the coordinate-wise generalised scheme and
/// cumulates the averaged pairwise areas. DeLichtenberg is rejected with
/// UnsupportedScheme.
std::vector<CombinedRecord> combine3(std::span<const PVector> ps, OrderingScheme scheme,
                                     const geometry::TessellateOptions& options = {});

}  // namespace vfdr::highdim
