#include "vfdr/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vfdr/error.hpp"

namespace vfdr {

namespace {

constexpr const char* kModule = "ordering";

double delichtenberg_factor(double p) {
  const double r = p / 0.001;
  return 1.0 + r * r;
}

}  // namespace

std::string_view to_string(OrderingScheme scheme) {
  switch (scheme) {
    case OrderingScheme::Euclidean: return "euclidean";
    case OrderingScheme::Maximum: return "maximum";
    case OrderingScheme::Summation: return "summation";
    case OrderingScheme::DeLichtenberg: return "delichtenberg";
  }
  return "unknown";
}

std::optional<OrderingScheme> parse_scheme(std::string_view name) {
  for (auto s : {OrderingScheme::Euclidean, OrderingScheme::Maximum, OrderingScheme::Summation,
                 OrderingScheme::DeLichtenberg}) {
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

double distance(OrderingScheme scheme, std::span<const double> coords) {
  if (coords.size() != 2 && coords.size() != 3) {
    throw Error(ErrorKind::OutOfDomain, kModule,
                "p-vectors must have 2 or 3 coordinates, got " + std::to_string(coords.size()));
  }
  for (double c : coords) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw Error(ErrorKind::OutOfDomain, kModule, "coordinate outside [0,1]: " + std::to_string(c));
    }
  }
  switch (scheme) {
    case OrderingScheme::Euclidean: {
      double ss = 0.0;
      for (double c : coords) ss += c * c;
      return std::sqrt(ss);
    }
    case OrderingScheme::Maximum:
      return *std::max_element(coords.begin(), coords.end());
    case OrderingScheme::Summation:
      return std::accumulate(coords.begin(), coords.end(), 0.0);
    case OrderingScheme::DeLichtenberg:
      if (coords.size() != 2) {
        throw Error(ErrorKind::UnsupportedScheme, kModule,
                    "the de Lichtenberg ordering is only defined for 2-dimensional p-vectors");
      }
      // grouped per coordinate so swapping the coordinates gives the same double
      return (coords[0] * delichtenberg_factor(coords[0])) * (coords[1] * delichtenberg_factor(coords[1]));
  }
  return 0.0;
}

double distance(OrderingScheme scheme, const PVector& p) { return distance(scheme, p.coords); }

Ranking rank_pvectors(OrderingScheme scheme, std::span<const PVector> ps) {
  if (ps.empty()) throw Error(ErrorKind::EmptyInput, kModule, "no p-vectors to rank");
  Ranking ranking;
  ranking.scores.reserve(ps.size());
  for (const auto& p : ps) ranking.scores.push_back(distance(scheme, p));

  ranking.order.resize(ps.size());
  std::iota(ranking.order.begin(), ranking.order.end(), std::size_t{0});
  const auto& scores = ranking.scores;
  std::sort(ranking.order.begin(), ranking.order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] < scores[b];
    const auto& ca = ps[a].coords;
    const auto& cb = ps[b].coords;
    if (ca != cb) return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
    return a < b;
  });
  return ranking;
}

}  // namespace vfdr
