#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vfdr/pipeline.hpp"

namespace vfdr {

enum class Rule { BenjaminiHochberg, SpacingsBH, LeftTailFdr };

std::string_view to_string(Rule rule);

/// Outcome of a step-up rule. `rejected` holds input positions in the
/// rule's order (smallest first); `level` is alpha or the FDR cutoff.
struct DecisionSet {
  std::vector<std::size_t> rejected;
  std::size_t k = 0;
  double level = 0.0;
  Rule rule = Rule::BenjaminiHochberg;
};

/// Benjamini-Hochberg: k = max{i : p_(i) <= i alpha / m}.
DecisionSet bh_reject(std::span<const double> pvalues, double alpha);

/// Spacings form of BH without the (m+1)/m factor:
/// k = max{i : mean of the first i spacings <= alpha / (m + 1)}.
DecisionSet spacings_bh(std::span<const double> pvalues, double alpha);

/// Rejects exactly the records whose left-tail FDR is below `cutoff`.
DecisionSet leftfdr_reject(std::span<const CombinedRecord> records, double cutoff);

}  // namespace vfdr
