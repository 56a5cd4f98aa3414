#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vfdr/empnull.hpp"
#include "vfdr/mtp.hpp"
#include "vfdr/ordering.hpp"
#include "vfdr/pipeline.hpp"
#include "vfdr/pvector.hpp"

namespace vfdr {

/// "bh", "spacings-bh" or "empirical-null" (the left-tail FDR rule).
std::optional<Rule> parse_method(std::string_view name);
std::string_view method_name(Rule rule);

struct AnalyzeOptions {
  int dims = 2;
  OrderingScheme scheme = kDefaultScheme;
  Rule method = Rule::BenjaminiHochberg;
  double alpha = 0.05;
  double fdr_cutoff = 0.05;
  int null_components = 2;
  double null_penalty = 800.0;
  std::uint64_t seed = 1;
  bool jitter_duplicates = false;
};

struct DecisionSummary {
  Rule rule = Rule::BenjaminiHochberg;
  std::size_t k = 0;
  double level = 0.0;
};

/// Everything one analysis run produces. `metadata` is an ordered list of
/// header fields (version, flags, fit summary); `records` are in rank order.
struct AnalysisReport {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::string timestamp;
  int dims = 2;
  std::optional<empnull::MixtureFit> fit;
  std::vector<CombinedRecord> records;
  DecisionSummary decision;

  const std::string* find(std::string_view key) const;
};

/// Runs ordering, combination and the chosen rule on validated p-vectors.
/// `input_name` is recorded in the metadata only.
AnalysisReport analyze(std::span<const PVector> ps, const AnalyzeOptions& options,
                       std::string_view input_name = "");

}  // namespace vfdr
