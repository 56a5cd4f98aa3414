#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace vfdr {

/// One hypothesis' component p-values: a point in the unit square (or cube).
struct PVector {
  std::string id;
  std::vector<double> coords;

  std::size_t dims() const noexcept { return coords.size(); }
};

/// Throws OutOfDomain (attributed to `module`) unless every coordinate of
/// every vector lies in [0, 1] and each vector has `dims` coordinates.
void validate_pvectors(std::span<const PVector> ps, std::size_t dims, const char* module);

}  // namespace vfdr
