#include "vfdr/analyze.hpp"

#include <algorithm>

#include "vfdr/csv.hpp"
#include "vfdr/error.hpp"
#include "vfdr/highdim.hpp"

#ifndef VFDR_VERSION
#define VFDR_VERSION "unknown"
#endif

namespace vfdr {

std::optional<Rule> parse_method(std::string_view name) {
  if (name == "bh") return Rule::BenjaminiHochberg;
  if (name == "spacings-bh") return Rule::SpacingsBH;
  if (name == "empirical-null") return Rule::LeftTailFdr;
  return std::nullopt;
}

std::string_view method_name(Rule rule) {
  switch (rule) {
    case Rule::BenjaminiHochberg: return "bh";
    case Rule::SpacingsBH: return "spacings-bh";
    case Rule::LeftTailFdr: return "empirical-null";
  }
  return "unknown";
}

const std::string* AnalysisReport::find(std::string_view key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return &v;
  }
  return nullptr;
}

AnalysisReport analyze(std::span<const PVector> ps, const AnalyzeOptions& options, std::string_view input_name) {
  constexpr const char* kModule = "analyze";
  if (options.dims != 2 && options.dims != 3) {
    throw Error(ErrorKind::InvalidConfig, kModule, "--dims must be 2 or 3");
  }
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw Error(ErrorKind::InvalidConfig, kModule, "alpha must lie in (0, 1)");
  }
  if (!(options.fdr_cutoff > 0.0 && options.fdr_cutoff < 1.0)) {
    throw Error(ErrorKind::InvalidConfig, kModule, "the FDR cutoff must lie in (0, 1)");
  }

  AnalysisReport report;
  report.dims = options.dims;
  auto& meta = report.metadata;
  meta.emplace_back("version", VFDR_VERSION);
  if (!input_name.empty()) meta.emplace_back("input", std::string(input_name));
  meta.emplace_back("dims", std::to_string(options.dims));
  meta.emplace_back("ordering", std::string(to_string(options.scheme)));
  meta.emplace_back("method", std::string(method_name(options.method)));
  if (options.method == Rule::LeftTailFdr) {
    meta.emplace_back("fdr-cutoff", csv::format_number(options.fdr_cutoff));
    meta.emplace_back("null-J", std::to_string(options.null_components));
    meta.emplace_back("null-P", csv::format_number(options.null_penalty));
  } else {
    meta.emplace_back("alpha", csv::format_number(options.alpha));
  }
  meta.emplace_back("seed", std::to_string(options.seed));
  meta.emplace_back("jitter-duplicates", options.jitter_duplicates ? "true" : "false");

  const geometry::TessellateOptions tess{options.jitter_duplicates, options.seed};
  if (options.dims == 2) {
    report.records = combine(ps, options.scheme, tess);
  } else {
    if (ps.size() < 2) throw Error(ErrorKind::TooFewPoints, kModule, "combination needs at least two p-vectors");
    validate_pvectors(ps, 3, kModule);
    report.records = highdim::combine3(ps, options.scheme, tess);
  }
  auto& records = report.records;

  DecisionSet decisions;
  if (options.method == Rule::LeftTailFdr) {
    std::vector<double> z(records.size());
    std::transform(records.begin(), records.end(), z.begin(), [](const CombinedRecord& r) { return r.z; });
    report.fit = empnull::fit_mixture(z, options.null_components, options.null_penalty, options.seed);
    for (auto& r : records) {
      r.fdr = empnull::local_fdr(*report.fit, r.z);
      r.left_fdr = empnull::left_tail_fdr(*report.fit, r.z);
    }
    decisions = leftfdr_reject(records, options.fdr_cutoff);
  } else {
    std::vector<double> t(records.size());
    std::transform(records.begin(), records.end(), t.begin(),
                   [](const CombinedRecord& r) { return std::min(r.cumulative, 1.0); });
    decisions = options.method == Rule::BenjaminiHochberg ? bh_reject(t, options.alpha)
                                                          : spacings_bh(t, options.alpha);
  }
  for (std::size_t pos : decisions.rejected) records[pos].reject = true;
  report.decision = {decisions.rule, decisions.k, decisions.level};
  return report;
}

}  // namespace vfdr
