#include "vfdr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "vfdr/error.hpp"

namespace vfdr::geometry {

namespace {

constexpr const char* kModule = "geometry";

// Uniform bucket grid over the unit square, stored CSR-style.
class BucketGrid {
 public:
  explicit BucketGrid(std::span<const Point> pts)
      : side_(std::max(1, static_cast<int>(std::ceil(std::sqrt(pts.size() / 2.0))))),
        start_(static_cast<std::size_t>(side_) * side_ + 1, 0),
        items_(pts.size()) {
    for (const auto& p : pts) ++start_[index(bucket(p.x), bucket(p.y)) + 1];
    std::partial_sum(start_.begin(), start_.end(), start_.begin());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      items_[fill[index(bucket(pts[i].x), bucket(pts[i].y))]++] = i;
    }
  }

  int side() const noexcept { return side_; }
  double width() const noexcept { return 1.0 / side_; }

  int bucket(double v) const noexcept {
    return std::clamp(static_cast<int>(v * side_), 0, side_ - 1);
  }

  std::span<const std::size_t> items(int bx, int by) const noexcept {
    const auto k = index(bx, by);
    return {items_.data() + start_[k], start_[k + 1] - start_[k]};
  }

 private:
  std::size_t index(int bx, int by) const noexcept {
    return static_cast<std::size_t>(by) * side_ + static_cast<std::size_t>(bx);
  }

  int side_;
  std::vector<std::size_t> start_;
  std::vector<std::size_t> items_;
};

// Intersect a convex polygon with the half-plane of points at least as close
// to `s` as to `q`. Returns false when the polygon was left untouched.
bool clip_by_bisector(std::vector<Point>& poly, std::vector<Point>& scratch,
                      std::vector<double>& side, const Point& s, const Point& q) {
  double nx = q.x - s.x;
  double ny = q.y - s.y;
  const double len = std::hypot(nx, ny);
  nx /= len;
  ny /= len;
  const double mx = 0.5 * (s.x + q.x);
  const double my = 0.5 * (s.y + q.y);

  // Jittered duplicates sit ~1e-12 apart; their bisector needs a finer tolerance.
  const double eps = kPredicateEpsilon * std::min(1.0, len);

  side.resize(poly.size());
  bool any_outside = false;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    side[i] = (poly[i].x - mx) * nx + (poly[i].y - my) * ny;
    any_outside |= side[i] > eps;
  }
  if (!any_outside) return false;

  scratch.clear();
  const std::size_t k = poly.size();
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = (i + 1) % k;
    const double da = side[i];
    const double db = side[j];
    if (da <= eps) scratch.push_back(poly[i]);
    if ((da < -eps && db > eps) || (da > eps && db < -eps)) {
      const double t = da / (da - db);
      scratch.push_back({poly[i].x + t * (poly[j].x - poly[i].x),
                         poly[i].y + t * (poly[j].y - poly[i].y)});
    }
  }
  poly.swap(scratch);
  return true;
}

double max_radius_sq(const std::vector<Point>& poly, const Point& s) {
  double r2 = 0.0;
  for (const auto& v : poly) {
    const double dx = v.x - s.x;
    const double dy = v.y - s.y;
    r2 = std::max(r2, dx * dx + dy * dy);
  }
  return r2;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Indices (other than the first of each group) whose coordinates exactly
// repeat an earlier site.
std::vector<std::size_t> duplicate_sites(std::span<const Point> sites) {
  std::vector<std::size_t> order(sites.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sites[a].x != sites[b].x) return sites[a].x < sites[b].x;
    if (sites[a].y != sites[b].y) return sites[a].y < sites[b].y;
    return a < b;
  });
  std::vector<std::size_t> dups;
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& a = sites[order[k - 1]];
    const auto& b = sites[order[k]];
    if (a.x == b.x && a.y == b.y) dups.push_back(order[k]);
  }
  std::sort(dups.begin(), dups.end());
  return dups;
}

double nudge(double v, double delta) {
  const double moved = v + delta;
  return (moved < 0.0 || moved > 1.0) ? v - delta : moved;
}

}  // namespace

Tessellation::Tessellation(std::vector<Point> sites, std::vector<Cell> cells, std::size_t jittered)
    : sites_(std::move(sites)), cells_(std::move(cells)), jittered_(jittered) {}

double polygon_area(std::span<const Point> polygon) {
  const std::size_t k = polygon.size();
  if (k < 3) return 0.0;
  // Relative to the first vertex, so tiny cells far from the origin keep their digits.
  const Point o = polygon[0];
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < k; ++i) {
    const double ax = polygon[i].x - o.x, ay = polygon[i].y - o.y;
    const double bx = polygon[i + 1].x - o.x, by = polygon[i + 1].y - o.y;
    twice += ax * by - ay * bx;
  }
  return 0.5 * twice;
}

Tessellation voronoi_tessellate(std::span<const Point> input, const TessellateOptions& options) {
  if (input.empty()) throw Error(ErrorKind::EmptyInput, kModule, "no points to tessellate");
  for (std::size_t i = 0; i < input.size(); ++i) {
    const auto& p = input[i];
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
      throw Error(ErrorKind::OutOfDomain, kModule,
                  "point " + std::to_string(i) + " (" + std::to_string(p.x) + ", " +
                      std::to_string(p.y) + ") lies outside the unit square");
    }
  }

  std::vector<Point> sites(input.begin(), input.end());
  std::size_t jittered = 0;
  for (int round = 0;; ++round) {
    const auto dups = duplicate_sites(sites);
    if (dups.empty()) break;
    if (!options.jitter_duplicates) {
      const auto& p = sites[dups.front()];
      throw Error(ErrorKind::DuplicatePoints, kModule,
                  std::to_string(dups.size()) + " duplicate point(s), first at index " +
                      std::to_string(dups.front()) + " (" + std::to_string(p.x) + ", " +
                      std::to_string(p.y) + ")");
    }
    if (round == 8) {
      throw Error(ErrorKind::DuplicatePoints, kModule, "jitter failed to separate duplicates");
    }
    for (std::size_t i : dups) {
      std::mt19937_64 rng(splitmix64(options.jitter_seed ^ splitmix64(i + 0x100000000ULL * round)));
      const double angle = std::uniform_real_distribution<double>(0.0, 6.283185307179586)(rng);
      sites[i].x = nudge(sites[i].x, kJitterMagnitude * std::cos(angle));
      sites[i].y = nudge(sites[i].y, kJitterMagnitude * std::sin(angle));
    }
    jittered += dups.size();
  }

  const BucketGrid grid(sites);
  const double h = grid.width();
  std::vector<Cell> cells(sites.size());
  std::vector<Point> poly;
  std::vector<Point> scratch;
  std::vector<double> side;
  std::vector<std::pair<double, std::size_t>> ring;

  for (std::size_t i = 0; i < sites.size(); ++i) {
    const Point s = sites[i];
    poly.assign({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
    double r2 = max_radius_sq(poly, s);
    const int bx = grid.bucket(s.x);
    const int by = grid.bucket(s.y);

    for (int r = 0; r <= grid.side(); ++r) {
      ring.clear();
      for (int y = by - r; y <= by + r; ++y) {
        if (y < 0 || y >= grid.side()) continue;
        const bool edge_row = (y == by - r || y == by + r);
        for (int x = bx - r; x <= bx + r; x += (edge_row || r == 0) ? 1 : 2 * r) {
          if (x < 0 || x >= grid.side()) continue;
          for (std::size_t j : grid.items(x, y)) {
            if (j == i) continue;
            const double dx = sites[j].x - s.x;
            const double dy = sites[j].y - s.y;
            ring.emplace_back(dx * dx + dy * dy, j);
          }
        }
      }
      std::sort(ring.begin(), ring.end());
      for (const auto& [d2, j] : ring) {
        if (d2 >= 4.0 * r2) break;
        if (clip_by_bisector(poly, scratch, side, s, sites[j])) r2 = max_radius_sq(poly, s);
      }
      // Unvisited sites are farther than r*h; they cannot cut a cell of radius <= r*h/2.
      const double reach = r * h;
      if (reach * reach >= 4.0 * r2) break;
    }

    const double area = polygon_area(poly);
    if (!(area > 0.0)) {
      throw Error(ErrorKind::NonPositiveArea, kModule,
                  "cell " + std::to_string(i) + " has non-positive area " + std::to_string(area));
    }
    cells[i] = Cell{i, poly, area};
  }

  return Tessellation(std::move(sites), std::move(cells), jittered);
}

Tessellation voronoi_tessellate(std::span<const PVector> points, const TessellateOptions& options) {
  validate_pvectors(points, 2, kModule);
  std::vector<Point> sites;
  sites.reserve(points.size());
  for (const auto& p : points) sites.push_back({p.coords[0], p.coords[1]});
  return voronoi_tessellate(sites, options);
}

std::vector<double> cell_areas(const Tessellation& t) {
  std::vector<double> areas(t.size());
  for (const auto& c : t.cells()) areas[c.input] = c.area;
  return areas;
}

}  // namespace vfdr::geometry
