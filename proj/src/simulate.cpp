#include "vfdr/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <random>
#include <string>
#include <thread>

#include "vfdr/csv.hpp"
#include "vfdr/empnull.hpp"
#include "vfdr/error.hpp"
#include "vfdr/geometry.hpp"
#include "vfdr/highdim.hpp"
#include "vfdr/normal.hpp"
#include "vfdr/pipeline.hpp"

namespace vfdr::simulate {

namespace {

constexpr const char* kModule = "simulate";

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::size_t rounded_count(double frac, std::size_t m) {
  return static_cast<std::size_t>(std::llround(frac * static_cast<double>(m)));
}

// Pairwise summation keeps the mean independent of accumulation order quirks
// and accurate for long replicate lists.
double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

std::pair<double, double> mean_and_se(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  const double mean = pairwise_sum(v) / n;
  if (v.size() < 2) return {mean, 0.0};
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
  return {mean, std::sqrt(pairwise_sum(sq) / (n - 1.0) / n)};
}

DecisionSet to_input_indices(DecisionSet d, const std::vector<CombinedRecord>& records) {
  for (auto& pos : d.rejected) pos = records[pos].input_index;
  return d;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::BH: return "bh";
    case Method::SpacingsBH: return "spacings-bh";
    case Method::EmpiricalNull: return "empirical-null";
    case Method::MaxBH: return "max-bh";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (auto m : {Method::BH, Method::SpacingsBH, Method::EmpiricalNull, Method::MaxBH}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

std::string_view to_string(PValueConvention convention) {
  return convention == PValueConvention::TwoSided ? "twosided" : "paper-literal";
}

std::optional<PValueConvention> parse_convention(std::string_view name) {
  if (name == "twosided") return PValueConvention::TwoSided;
  if (name == "paper-literal") return PValueConvention::PaperLiteral;
  return std::nullopt;
}

void validate(const StudyConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidConfig, kModule, msg); };
  if (cfg.m < 2) fail("m must be at least 2");
  if (!(cfg.frac_alt >= 0.0 && cfg.frac_alt <= 1.0)) fail("fracAlt must lie in [0,1]");
  if (!(cfg.mixed_frac >= 0.0 && cfg.mixed_frac <= 1.0)) fail("mixedNullFrac must lie in [0,1]");
  if (rounded_count(cfg.frac_alt, cfg.m) + rounded_count(cfg.mixed_frac, cfg.m) > cfg.m) {
    fail("fracAlt + mixedNullFrac exceeds 1");
  }
  if (!std::isfinite(cfg.mu_alt)) fail("muA must be finite");
  if (cfg.rhos.empty()) fail("at least one rho is required");
  for (double rho : cfg.rhos) {
    if (!(std::abs(rho) < 1.0)) fail("rho must satisfy |rho| < 1");
    if (cfg.dims == 3 && rho < 0.0) fail("3-dimensional studies need rho >= 0 (equicorrelation)");
  }
  if (cfg.reps < 1) fail("reps must be at least 1");
  if (cfg.dims != 2 && cfg.dims != 3) fail("dims must be 2 or 3");
  if (cfg.methods.empty()) fail("at least one method is required");
  bool needs_scheme = false;
  for (auto m : cfg.methods) needs_scheme |= m != Method::MaxBH;
  if (needs_scheme && cfg.schemes.empty()) fail("at least one ordering scheme is required");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) fail("alpha must lie in (0,1)");
  if (!(cfg.fdr_cutoff > 0.0 && cfg.fdr_cutoff < 1.0)) fail("cutoff must lie in (0,1)");
  if (cfg.null_components != 2 && cfg.null_components != 3) fail("null-J must be 2 or 3");
  if (!(cfg.null_penalty >= 0.0)) fail("null-P must be >= 0");
  if (cfg.dims == 3) {
    for (auto s : cfg.schemes) {
      if (s == OrderingScheme::DeLichtenberg && needs_scheme) {
        throw Error(ErrorKind::UnsupportedScheme, kModule,
                    "the de Lichtenberg ordering has no 3-dimensional form");
      }
    }
  }
}

std::uint64_t replicate_seed(std::uint64_t seed, std::size_t rep) {
  return splitmix64(splitmix64(seed) ^ splitmix64(0xa5a5a5a5ULL + rep));
}

Statistics gen_statistics(const StudyConfig& cfg, double rho, std::size_t rep) {
  const std::size_t d = static_cast<std::size_t>(cfg.dims);
  const std::size_t n_alt = rounded_count(cfg.frac_alt, cfg.m);
  const std::size_t n_mixed = rounded_count(cfg.mixed_frac, cfg.m);

  Statistics s;
  s.dims = d;
  s.values.resize(cfg.m * d);
  s.truth.assign(cfg.m, false);
  s.kind.assign(cfg.m, 'n');

  std::mt19937_64 rng(replicate_seed(cfg.seed, rep));
  std::normal_distribution<double> noise(0.0, 1.0);
  const double a = std::sqrt(std::max(rho, 0.0));
  const double b = std::sqrt(1.0 - std::max(rho, 0.0));
  const double c = std::sqrt(1.0 - rho * rho);

  for (std::size_t i = 0; i < cfg.m; ++i) {
    double e[3];
    for (std::size_t k = 0; k < d; ++k) e[k] = noise(rng);
    double* t = &s.values[i * d];
    if (d == 2) {
      t[0] = e[0];
      t[1] = rho * e[0] + c * e[1];
    } else {
      // Equicorrelated: shared factor drawn as an extra deviate.
      const double shared = noise(rng);
      for (std::size_t k = 0; k < d; ++k) t[k] = a * shared + b * e[k];
    }

    if (i < n_alt) {
      for (std::size_t k = 0; k < d; ++k) t[k] += cfg.mu_alt;
      s.truth[i] = true;
      s.kind[i] = 'a';
    } else if (i < n_alt + n_mixed) {
      const std::size_t null_component = (i - n_alt) % d;
      for (std::size_t k = 0; k < d; ++k) {
        if (k != null_component) t[k] += cfg.mu_alt;
      }
      s.kind[i] = 'x';
    }
  }
  return s;
}

double statistic_to_pvalue(double t, PValueConvention convention) {
  const double tail = normal::upper_tail(std::abs(t));
  const double p = convention == PValueConvention::TwoSided ? 2.0 * tail : tail;
  return std::clamp(p, kPValueFloor, 1.0);
}

std::vector<PVector> to_pvectors(const Statistics& stats, PValueConvention convention) {
  std::vector<PVector> ps(stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const char* prefix = stats.kind[i] == 'a' ? "alt_" : stats.kind[i] == 'x' ? "mix_" : "null_";
    ps[i].id = prefix + std::to_string(i);
    ps[i].coords.resize(stats.dims);
    for (std::size_t k = 0; k < stats.dims; ++k) {
      ps[i].coords[k] = statistic_to_pvalue(stats.at(i, k), convention);
    }
  }
  return ps;
}

double OutcomeCounts::false_discovery_proportion() const {
  return static_cast<double>(V) / static_cast<double>(std::max<std::size_t>(R, 1));
}

double OutcomeCounts::true_discovery_fraction() const {
  const std::size_t alternatives = S + T;
  return alternatives == 0 ? 0.0 : static_cast<double>(S) / static_cast<double>(alternatives);
}

OutcomeCounts evaluate(const DecisionSet& decisions, const std::vector<bool>& truth) {
  OutcomeCounts c;
  c.m = truth.size();
  std::vector<bool> rejected(truth.size(), false);
  for (std::size_t idx : decisions.rejected) {
    if (idx >= truth.size()) {
      throw Error(ErrorKind::IndexMismatch, kModule,
                  "rejected index " + std::to_string(idx) + " outside " + std::to_string(truth.size()) +
                      " hypotheses");
    }
    if (rejected[idx]) {
      throw Error(ErrorKind::IndexMismatch, kModule, "index " + std::to_string(idx) + " rejected twice");
    }
    rejected[idx] = true;
  }
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i]) {
      ++(rejected[i] ? c.S : c.T);
    } else {
      ++c.m0;
      ++(rejected[i] ? c.V : c.U);
    }
  }
  c.R = c.V + c.S;
  return c;
}

std::vector<Arm> study_arms(const StudyConfig& cfg) {
  std::vector<Arm> arms;
  for (auto method : cfg.methods) {
    if (method == Method::MaxBH) {
      arms.push_back({std::nullopt, method});
    } else {
      for (auto scheme : cfg.schemes) arms.push_back({scheme, method});
    }
  }
  return arms;
}

std::vector<OutcomeCounts> run_replicate(const StudyConfig& cfg, double rho, std::size_t rep) {
  const auto stats = gen_statistics(cfg, rho, rep);
  const auto ps = to_pvectors(stats, cfg.convention);
  const auto arms = study_arms(cfg);

  // Clamped p-values can coincide exactly; displace those deterministically.
  const geometry::TessellateOptions options{true, replicate_seed(cfg.seed, rep)};
  std::vector<double> areas;
  bool need_areas = false;
  for (const auto& arm : arms) need_areas |= arm.method != Method::MaxBH;
  if (need_areas) {
    if (cfg.dims == 2) {
      areas = geometry::cell_areas(geometry::voronoi_tessellate(ps, options));
    } else {
      areas = highdim::pairwise_average_areas(ps, options).mean;
    }
  }

  std::vector<OutcomeCounts> out;
  out.reserve(arms.size());
  for (const auto& arm : arms) {
    DecisionSet decisions;
    if (arm.method == Method::MaxBH) {
      std::vector<double> maxima(ps.size());
      for (std::size_t i = 0; i < ps.size(); ++i) {
        maxima[i] = *std::max_element(ps[i].coords.begin(), ps[i].coords.end());
      }
      decisions = bh_reject(maxima, cfg.alpha);
    } else {
      auto records = combine_areas(ps, areas, *arm.scheme);
      if (arm.method == Method::EmpiricalNull) {
        std::vector<double> z(records.size());
        for (std::size_t r = 0; r < records.size(); ++r) z[r] = records[r].z;
        const auto fit = empnull::fit_mixture(z, cfg.null_components, cfg.null_penalty,
                                              replicate_seed(cfg.seed, rep));
        for (auto& rec : records) rec.left_fdr = empnull::left_tail_fdr(fit, rec.z);
        decisions = to_input_indices(leftfdr_reject(records, cfg.fdr_cutoff), records);
      } else {
        std::vector<double> t(records.size());
        for (std::size_t r = 0; r < records.size(); ++r) t[r] = std::min(records[r].cumulative, 1.0);
        decisions = arm.method == Method::BH ? bh_reject(t, cfg.alpha) : spacings_bh(t, cfg.alpha);
        decisions = to_input_indices(std::move(decisions), records);
      }
    }
    out.push_back(evaluate(decisions, stats.truth));
  }
  return out;
}

const StudyRow* StudyResult::find(std::optional<OrderingScheme> scheme, Method method, double rho) const {
  for (const auto& row : rows) {
    if (row.arm.scheme == scheme && row.arm.method == method && row.rho == rho) return &row;
  }
  return nullptr;
}

unsigned worker_count(unsigned requested) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("VORONOI_FDR_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

StudyResult run_study(const StudyConfig& cfg) {
  validate(cfg);
  const auto arms = study_arms(cfg);
  const std::size_t jobs = cfg.rhos.size() * cfg.reps;

  std::vector<std::vector<OutcomeCounts>> outcomes(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      try {
        outcomes[job] = run_replicate(cfg, cfg.rhos[job / cfg.reps], job % cfg.reps);
      } catch (...) {
        errors[job] = std::current_exception();
      }
    }
  };
  const unsigned n_workers = std::min<std::size_t>(worker_count(cfg.threads), jobs);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  StudyResult result;
  std::vector<double> fdp(cfg.reps), tdf(cfg.reps);
  for (std::size_t ri = 0; ri < cfg.rhos.size(); ++ri) {
    for (std::size_t a = 0; a < arms.size(); ++a) {
      for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
        const auto& c = outcomes[ri * cfg.reps + rep][a];
        fdp[rep] = c.false_discovery_proportion();
        tdf[rep] = c.true_discovery_fraction();
      }
      StudyRow row;
      row.arm = arms[a];
      row.rho = cfg.rhos[ri];
      row.mu_alt = cfg.mu_alt;
      std::tie(row.fdr, row.fdr_se) = mean_and_se(fdp);
      std::tie(row.power, row.power_se) = mean_and_se(tdf);
      row.reps = cfg.reps;
      result.rows.push_back(row);
    }
  }
  return result;
}

void write_study_csv(const StudyResult& result, std::ostream& out) {
  out << "scheme,method,rho,muA,fdr,fdr_se,power,power_se,reps\n";
  for (const auto& row : result.rows) {
    out << (row.arm.scheme ? to_string(*row.arm.scheme) : std::string_view("none")) << ','
        << to_string(row.arm.method) << ',' << csv::format_number(row.rho, 10) << ','
        << csv::format_number(row.mu_alt, 10) << ',' << csv::format_number(row.fdr, 10) << ','
        << csv::format_number(row.fdr_se, 10) << ',' << csv::format_number(row.power, 10) << ','
        << csv::format_number(row.power_se, 10) << ',' << row.reps << '\n';
  }
}

}  // namespace vfdr::simulate
