#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vfdr/pvector.hpp"

namespace vfdr {

/// Distance-from-origin used to rank p-vectors. Euclidean, Maximum and
/// Summation have concave contours; DeLichtenberg's are convex.
enum class OrderingScheme { Euclidean, Maximum, Summation, DeLichtenberg };

inline constexpr OrderingScheme kDefaultScheme = OrderingScheme::Summation;

std::string_view to_string(OrderingScheme scheme);
std::optional<OrderingScheme> parse_scheme(std::string_view name);

struct Ranking {
  std::vector<std::size_t> order;  // order[r] = input index with rank r + 1
  std::vector<double> scores;      // distance per input index
};

/// Distance of a 2- or 3-dimensional p-vector from the origin. The 3D forms
/// are the coordinate-wise generalisations; DeLichtenberg has none and throws
/// UnsupportedScheme.
double distance(OrderingScheme scheme, std::span<const double> coords);
double distance(OrderingScheme scheme, const PVector& p);

/// Ascending by distance; ties by lexicographic coordinates, then input index.
Ranking rank_pvectors(OrderingScheme scheme, std::span<const PVector> ps);

}  // namespace vfdr
