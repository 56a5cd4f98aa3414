#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vfdr/pvector.hpp"

namespace vfdr::geometry {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Voronoi cell of one input site, clipped to the unit square.
struct Cell {
  std::size_t input = 0;
  std::vector<Point> polygon;  // counterclockwise, convex
  double area = 0.0;
};

struct TessellateOptions {
  /// Perturb exact duplicates by 1e-12 instead of failing with DuplicatePoints.
  bool jitter_duplicates = false;
  std::uint64_t jitter_seed = 0;
};

/// Orientation/side-of-line tolerance. Inputs within this distance of a
/// degenerate configuration may shift a boundary vertex by about this much,
/// which moves areas by O(1e-12) and never breaks the unit-sum invariant.
/// Bisector clipping scales it down for sites closer than unit distance.
inline constexpr double kPredicateEpsilon = 1e-12;
inline constexpr double kJitterMagnitude = 1e-12;

/// Immutable clipped Voronoi diagram of points in [0,1]^2.
class Tessellation {
 public:
  Tessellation(std::vector<Point> sites, std::vector<Cell> cells, std::size_t jittered);

  std::span<const Point> sites() const noexcept { return sites_; }
  std::span<const Cell> cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return cells_.size(); }
  /// Number of duplicate sites that were displaced in jitter mode.
  std::size_t jittered() const noexcept { return jittered_; }

 private:
  std::vector<Point> sites_;  // after jitter, if any
  std::vector<Cell> cells_;   // cells_[i].input == i
  std::size_t jittered_;
};

Tessellation voronoi_tessellate(std::span<const Point> sites, const TessellateOptions& options = {});

/// Uses the first two coordinates; every vector must be 2-dimensional.
Tessellation voronoi_tessellate(std::span<const PVector> points, const TessellateOptions& options = {});

/// Areas indexed by original input order.
std::vector<double> cell_areas(const Tessellation& t);

/// Shoelace area of a simple polygon (positive when counterclockwise).
double polygon_area(std::span<const Point> polygon);

}  // namespace vfdr::geometry
