#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "vfdr/mtp.hpp"
#include "vfdr/ordering.hpp"
#include "vfdr/pvector.hpp"

namespace vfdr::simulate {

/// Decision procedure applied to each simulated data set. MaxBH is the
/// existing approach: BH on the largest component p-value of each vector.
enum class Method { BH, SpacingsBH, EmpiricalNull, MaxBH };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

/// How a test statistic becomes a p-value: 2(1 - Phi(|t|)), or the literal
/// P(Z > |t|), which is uniform on (0, 1/2) under the null.
enum class PValueConvention { TwoSided, PaperLiteral };

std::string_view to_string(PValueConvention convention);
std::optional<PValueConvention> parse_convention(std::string_view name);

struct StudyConfig {
  std::size_t m = 2000;
  double frac_alt = 0.1;
  double mu_alt = 3.0;
  std::vector<double> rhos{0.0};
  std::size_t reps = 100;
  std::vector<OrderingScheme> schemes{OrderingScheme::Euclidean, OrderingScheme::Maximum,
                                      OrderingScheme::Summation, OrderingScheme::DeLichtenberg};
  std::vector<Method> methods{Method::BH, Method::MaxBH};
  double alpha = 0.05;
  double fdr_cutoff = 0.05;
  int null_components = 2;
  double null_penalty = 800.0;
  std::uint64_t seed = 1;
  int dims = 2;
  /// Fraction of null vectors with one non-null component, e.g. means (0, muA) or (muA, 0).
  double mixed_frac = 0.0;
  PValueConvention convention = PValueConvention::TwoSided;
  /// Worker threads; 0 means hardware concurrency. VORONOI_FDR_THREADS caps either.
  unsigned threads = 0;
};

/// Throws InvalidConfig / UnsupportedScheme for inconsistent settings.
void validate(const StudyConfig& cfg);

/// Test statistics of one replicate, row-major m x dims, plus truth flags
/// (true = every component non-null).
struct Statistics {
  std::size_t dims = 2;
  std::vector<double> values;
  std::vector<bool> truth;
  std::vector<char> kind;  // 'a' alternative, 'x' mixed, 'n' null

  std::size_t size() const noexcept { return truth.size(); }
  double at(std::size_t i, std::size_t k) const { return values[i * dims + k]; }
};

/// Per-replicate seed derived by hashing (seed, rep), so replicate streams do
/// not depend on scheduling.
std::uint64_t replicate_seed(std::uint64_t seed, std::size_t rep);

/// Alternatives occupy the first round(fracAlt m) rows, mixed vectors the next
/// round(mixedFrac m). The noise draws do not depend on rho.
Statistics gen_statistics(const StudyConfig& cfg, double rho, std::size_t rep);

inline constexpr double kPValueFloor = 1e-12;

double statistic_to_pvalue(double t, PValueConvention convention);

/// Component-wise p-values clamped to [1e-12, 1]; ids are alt_/mix_/null_ + row.
std::vector<PVector> to_pvectors(const Statistics& stats, PValueConvention convention);

/// Outcome table for m hypotheses: U/V = null retained/rejected,
/// T/S = alternative retained/rejected.
struct OutcomeCounts {
  std::size_t U = 0, V = 0, T = 0, S = 0, R = 0, m = 0, m0 = 0;

  double false_discovery_proportion() const;
  /// S / (S + T); 0 when there are no alternatives.
  double true_discovery_fraction() const;
};

OutcomeCounts evaluate(const DecisionSet& decisions, const std::vector<bool>& truth);

/// One (scheme, method) combination evaluated per replicate. MaxBH arms carry no scheme.
struct Arm {
  std::optional<OrderingScheme> scheme;
  Method method;
};

std::vector<Arm> study_arms(const StudyConfig& cfg);

/// Runs every arm on replicate `rep` at correlation `rho`.
std::vector<OutcomeCounts> run_replicate(const StudyConfig& cfg, double rho, std::size_t rep);

struct StudyRow {
  Arm arm;
  double rho = 0.0;
  double mu_alt = 0.0;
  double fdr = 0.0;
  double fdr_se = 0.0;
  double power = 0.0;
  double power_se = 0.0;
  std::size_t reps = 0;
};

struct StudyResult {
  std::vector<StudyRow> rows;

  const StudyRow* find(std::optional<OrderingScheme> scheme, Method method, double rho) const;
};

unsigned worker_count(unsigned requested);

StudyResult run_study(const StudyConfig& cfg);

/// Columns: scheme, method, rho, muA, fdr, fdr_se, power, power_se, reps.
void write_study_csv(const StudyResult& result, std::ostream& out);

}  // namespace vfdr::simulate
