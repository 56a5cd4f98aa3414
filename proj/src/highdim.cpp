#include "vfdr/highdim.hpp"

#include <string>

#include "vfdr/error.hpp"

namespace vfdr::highdim {

namespace {
constexpr const char* kModule = "highdim";
}

PairwiseAreas pairwise_average_areas(std::span<const PVector> ps,
                                     const geometry::TessellateOptions& options) {
  if (ps.size() < 2) {
    throw Error(ErrorKind::TooFewPoints, kModule, "pairwise areas need at least two p-vectors");
  }
  validate_pvectors(ps, 3, kModule);

  PairwiseAreas out;
  std::vector<geometry::Point> projected(ps.size());
  for (std::size_t k = 0; k < kProjections.size(); ++k) {
    const auto [a, b] = kProjections[k];
    for (std::size_t i = 0; i < ps.size(); ++i) projected[i] = {ps[i].coords[a], ps[i].coords[b]};
    try {
      const auto t = geometry::voronoi_tessellate(projected, options);
      out.projections[k] = geometry::cell_areas(t);
      out.jittered += t.jittered();
    } catch (const Error& e) {
      throw Error(e.kind(), kModule,
                  "projection (" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "): " + e.what());
    }
  }

  out.mean.resize(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    out.mean[i] = (out.projections[0][i] + out.projections[1][i] + out.projections[2][i]) / 3.0;
  }
  return out;
}

std::vector<CombinedRecord> combine3(std::span<const PVector> ps, OrderingScheme scheme,
                                     const geometry::TessellateOptions& options) {
  if (scheme == OrderingScheme::DeLichtenberg) {
    throw Error(ErrorKind::UnsupportedScheme, kModule,
                "the de Lichtenberg ordering has no 3-dimensional form");
  }
  const auto areas = pairwise_average_areas(ps, options);
  return combine_areas(ps, areas.mean, scheme);
}

}  // namespace vfdr::highdim
