#pragma once

// Monte Carlo nearest-neighbour area oracle. Independent of the library's
// clipping code: it only classifies sample points of the unit square by
// their nearest site.
//
// Samples are stratified: the square is cut into g x g strata with one
// uniform draw in each, so N = g^2. The reported standard error is the iid
// binomial one, sqrt(A (1 - A) / N), which over-states the error of the
// stratified estimator.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "vfdr/geometry.hpp"

namespace oracle {

struct McAreas {
  std::vector<double> area;
  std::size_t samples = 0;
  double se(std::size_t i) const {
    return std::sqrt(std::max(area[i] * (1.0 - area[i]), 0.0) / static_cast<double>(samples));
  }
};

class SiteIndex {
 public:
  explicit SiteIndex(std::span<const vfdr::geometry::Point> sites) : sites_(sites.begin(), sites.end()) {
    side_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(sites.size()))));
    buckets_.assign(side_ * side_, {});
    for (std::size_t i = 0; i < sites_.size(); ++i) buckets_[bucket(sites_[i].x, sites_[i].y)].push_back(i);
  }

  std::size_t nearest(double x, double y) const {
    const auto cx = static_cast<long>(cell(x));
    const auto cy = static_cast<long>(cell(y));
    const double h = 1.0 / static_cast<double>(side_);
    const long limit = static_cast<long>(side_);
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (long r = 0; r <= limit; ++r) {
      for (long gx = cx - r; gx <= cx + r; ++gx) {
        for (long gy = cy - r; gy <= cy + r; ++gy) {
          if (std::max(std::abs(gx - cx), std::abs(gy - cy)) != r) continue;
          if (gx < 0 || gy < 0 || gx >= limit || gy >= limit) continue;
          for (std::size_t i : buckets_[static_cast<std::size_t>(gx) * side_ + static_cast<std::size_t>(gy)]) {
            const double dx = sites_[i].x - x;
            const double dy = sites_[i].y - y;
            const double d = dx * dx + dy * dy;
            if (d < best || (d == best && i < arg)) {
              best = d;
              arg = i;
            }
          }
        }
      }
      const double reach = static_cast<double>(r) * h;
      if (best <= reach * reach) break;
    }
    return arg;
  }

 private:
  std::size_t cell(double v) const {
    return std::min(side_ - 1, static_cast<std::size_t>(std::max(v, 0.0) * static_cast<double>(side_)));
  }
  std::size_t bucket(double x, double y) const { return cell(x) * side_ + cell(y); }

  std::vector<vfdr::geometry::Point> sites_;
  std::size_t side_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
};

inline McAreas nearest_neighbour_areas(std::span<const vfdr::geometry::Point> sites, std::size_t samples,
                                       std::uint64_t seed) {
  const SiteIndex index(sites);
  const auto g = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(samples))));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::size_t> hits(sites.size(), 0);
  const double inv = 1.0 / static_cast<double>(g);
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      const double x = (static_cast<double>(i) + u(rng)) * inv;
      const double y = (static_cast<double>(j) + u(rng)) * inv;
      ++hits[index.nearest(x, y)];
    }
  }
  McAreas out;
  out.samples = g * g;
  out.area.resize(sites.size());
  for (std::size_t k = 0; k < sites.size(); ++k) {
    out.area[k] = static_cast<double>(hits[k]) / static_cast<double>(out.samples);
  }
  return out;
}

}  // namespace oracle
