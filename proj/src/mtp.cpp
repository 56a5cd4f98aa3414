#include "vfdr/mtp.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "vfdr/error.hpp"

namespace vfdr {

namespace {

constexpr const char* kModule = "mtp";

void check_inputs(std::span<const double> pvalues, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::OutOfDomain, kModule, "alpha must lie in (0,1), got " + std::to_string(alpha));
  }
  for (std::size_t i = 0; i < pvalues.size(); ++i) {
    if (!(pvalues[i] >= 0.0 && pvalues[i] <= 1.0)) {
      throw Error(ErrorKind::OutOfDomain, kModule,
                  "p-value " + std::to_string(i) + " outside [0,1]: " + std::to_string(pvalues[i]));
    }
  }
}

std::vector<std::size_t> sorted_order(std::span<const double> pvalues) {
  std::vector<std::size_t> order(pvalues.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
  return order;
}

DecisionSet take_first(std::vector<std::size_t> order, std::size_t k, double level, Rule rule) {
  order.resize(k);
  return DecisionSet{std::move(order), k, level, rule};
}

}  // namespace

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::BenjaminiHochberg: return "bh";
    case Rule::SpacingsBH: return "spacings-bh";
    case Rule::LeftTailFdr: return "left-tail-fdr";
  }
  return "unknown";
}

DecisionSet bh_reject(std::span<const double> pvalues, double alpha) {
  check_inputs(pvalues, alpha);
  auto order = sorted_order(pvalues);
  const double m = static_cast<double>(pvalues.size());
  std::size_t k = 0;
  for (std::size_t i = order.size(); i > 0; --i) {
    if (pvalues[order[i - 1]] <= static_cast<double>(i) * alpha / m) {
      k = i;
      break;
    }
  }
  return take_first(std::move(order), k, alpha, Rule::BenjaminiHochberg);
}

DecisionSet spacings_bh(std::span<const double> pvalues, double alpha) {
  check_inputs(pvalues, alpha);
  auto order = sorted_order(pvalues);
  // E[first spacing] = 1/(m+1) for m uniform order statistics.
  const double expected_spacing = 1.0 / (static_cast<double>(pvalues.size()) + 1.0);
  std::size_t k = 0;
  for (std::size_t i = order.size(); i > 0; --i) {
    // The first i spacings telescope to p_(i).
    const double mean_spacing = pvalues[order[i - 1]] / static_cast<double>(i);
    if (mean_spacing <= alpha * expected_spacing) {
      k = i;
      break;
    }
  }
  return take_first(std::move(order), k, alpha, Rule::SpacingsBH);
}

DecisionSet leftfdr_reject(std::span<const CombinedRecord> records, double cutoff) {
  std::vector<double> values;
  values.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].left_fdr) {
      throw Error(ErrorKind::MissingEstimates, kModule,
                  "record " + std::to_string(i) + " ('" + records[i].id + "') has no left-tail FDR");
    }
    const double v = *records[i].left_fdr;
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorKind::OutOfDomain, kModule,
                  "left-tail FDR of record " + std::to_string(i) + " outside [0,1]: " + std::to_string(v));
    }
    values.push_back(v);
  }
  auto order = sorted_order(values);
  std::size_t k = 0;
  while (k < order.size() && values[order[k]] < cutoff) ++k;
  return take_first(std::move(order), k, cutoff, Rule::LeftTailFdr);
}

}  // namespace vfdr
