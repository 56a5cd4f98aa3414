#include "vfdr/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vfdr/error.hpp"
#include "vfdr/normal.hpp"

namespace vfdr {

namespace {
constexpr const char* kModule = "pipeline";
}

std::vector<double> cumulative_areas(std::span<const double> areas) {
  if (areas.empty()) throw Error(ErrorKind::EmptyInput, kModule, "no areas to cumulate");
  std::vector<double> out;
  out.reserve(areas.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < areas.size(); ++i) {
    if (!(areas[i] > 0.0)) {
      throw Error(ErrorKind::NonPositiveArea, kModule,
                  "area at rank " + std::to_string(i + 1) + " is " + std::to_string(areas[i]));
    }
    sum += areas[i];
    out.push_back(sum);
  }
  if (std::abs(sum - 1.0) > kAreaSumTolerance) {
    throw Error(ErrorKind::AreaSumMismatch, kModule,
                "areas sum to " + std::to_string(sum) + ", expected 1");
  }
  return out;
}

std::vector<double> probit_transform(std::span<const double> cumulative) {
  std::vector<double> z;
  z.reserve(cumulative.size());
  for (double t : cumulative) {
    if (!(t > 0.0 && t <= 1.0 + kAreaSumTolerance)) {
      throw Error(ErrorKind::OutOfDomain, kModule,
                  "cumulative area " + std::to_string(t) + " outside (0, 1]");
    }
    z.push_back(normal::quantile(std::clamp(t, kProbitClamp, 1.0 - kProbitClamp)));
  }
  return z;
}

std::vector<CombinedRecord> combine_areas(std::span<const PVector> ps, std::span<const double> areas,
                                          OrderingScheme scheme) {
  if (areas.size() != ps.size()) {
    throw Error(ErrorKind::IndexMismatch, kModule, "one area per p-vector is required");
  }
  const Ranking ranking = rank_pvectors(scheme, ps);

  std::vector<double> ranked_areas;
  ranked_areas.reserve(ps.size());
  for (std::size_t idx : ranking.order) ranked_areas.push_back(areas[idx]);
  const auto cumulative = cumulative_areas(ranked_areas);
  const auto z = probit_transform(cumulative);

  std::vector<CombinedRecord> records(ps.size());
  for (std::size_t r = 0; r < ps.size(); ++r) {
    const std::size_t idx = ranking.order[r];
    auto& rec = records[r];
    rec.id = ps[idx].id;
    rec.input_index = idx;
    rec.coords = ps[idx].coords;
    rec.rank = r + 1;
    rec.area = ranked_areas[r];
    rec.cumulative = cumulative[r];
    rec.z = z[r];
  }
  return records;
}

std::vector<CombinedRecord> combine(std::span<const PVector> ps, OrderingScheme scheme,
                                    const geometry::TessellateOptions& options) {
  if (ps.size() < 2) {
    throw Error(ErrorKind::TooFewPoints, kModule, "combination needs at least two p-vectors");
  }
  validate_pvectors(ps, 2, kModule);
  const auto tessellation = geometry::voronoi_tessellate(ps, options);
  return combine_areas(ps, geometry::cell_areas(tessellation), scheme);
}

}  // namespace vfdr
