#include "vfdr/pvector.hpp"

#include <cmath>

#include "vfdr/error.hpp"

namespace vfdr {

void validate_pvectors(std::span<const PVector> ps, std::size_t dims, const char* module) {
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto& p = ps[i];
    if (p.dims() != dims) {
      throw Error(ErrorKind::OutOfDomain, module,
                  "p-vector " + std::to_string(i) + " ('" + p.id + "') has " +
                      std::to_string(p.dims()) + " coordinates, expected " + std::to_string(dims));
    }
    for (double c : p.coords) {
      if (!(c >= 0.0 && c <= 1.0)) {
        throw Error(ErrorKind::OutOfDomain, module,
                    "p-vector " + std::to_string(i) + " ('" + p.id +
                        "') has a coordinate outside [0,1]: " + std::to_string(c));
      }
    }
  }
}

}  // namespace vfdr
