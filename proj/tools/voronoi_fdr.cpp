// voronoi-fdr: command-line front end for Voronoi p-value combination.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vfdr/analyze.hpp"
#include "vfdr/config.hpp"
#include "vfdr/csv.hpp"
#include "vfdr/error.hpp"
#include "vfdr/geometry.hpp"
#include "vfdr/io.hpp"
#include "vfdr/periodicity.hpp"
#include "vfdr/simulate.hpp"

namespace {

using namespace vfdr;

constexpr int kExitConfig = 4;

// Output goes to the named file, or stdout for "" and "-".
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw Error(ErrorKind::InvalidConfig, "cli", "cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close() {
    stream().flush();
    if (!stream()) throw Error(ErrorKind::InvalidConfig, "cli", "write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct AnalyzeArgs {
  std::string in;
  std::string out;
  std::string ordering{to_string(kDefaultScheme)};
  std::string method = "bh";
  AnalyzeOptions opts;
};

int run_analyze(const AnalyzeArgs& a) {
  AnalyzeOptions opts = a.opts;
  opts.scheme = *parse_scheme(a.ordering);
  opts.method = *parse_method(a.method);
  const auto ps = io::read_pvectors(a.in, static_cast<std::size_t>(opts.dims));
  auto report = analyze(ps, opts, std::filesystem::path(a.in).filename().string());
  report.timestamp = io::current_timestamp();
  Sink sink(a.out);
  io::write_report(report, sink.stream());
  sink.close();
  std::fprintf(stderr, "%zu hypotheses, %zu rejected (%s)\n", report.records.size(), report.decision.k,
               std::string(method_name(report.decision.rule)).c_str());
  return 0;
}

struct SimulateArgs {
  std::string config;
  std::string out;
  std::string dataset_out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::size_t> reps;
  std::string convention;
};

int run_simulate(const SimulateArgs& a) {
  auto cfg = a.config.empty() ? simulate::StudyConfig{} : config::load_study_config(a.config);
  if (a.seed) cfg.seed = *a.seed;
  if (a.threads) cfg.threads = *a.threads;
  if (a.reps) cfg.reps = *a.reps;
  if (!a.convention.empty()) cfg.convention = *simulate::parse_convention(a.convention);
  simulate::validate(cfg);

  if (!a.dataset_out.empty()) {
    const auto stats = simulate::gen_statistics(cfg, cfg.rhos.front(), 0);
    Sink sink(a.dataset_out);
    io::write_pvectors(simulate::to_pvectors(stats, cfg.convention), sink.stream());
    sink.close();
  }
  const auto result = simulate::run_study(cfg);
  Sink sink(a.out);
  simulate::write_study_csv(result, sink.stream());
  sink.close();
  return 0;
}

struct VoronoiArgs {
  std::string in;
  std::string out;
  std::string polygons;
  bool jitter = false;
  std::uint64_t seed = 1;
};

int run_voronoi(const VoronoiArgs& a) {
  const auto ps = io::read_pvectors(a.in, 2);
  const auto tess = geometry::voronoi_tessellate(ps, {a.jitter, a.seed});
  Sink sink(a.out);
  io::write_areas(tess, ps, sink.stream());
  sink.close();
  if (!a.polygons.empty()) {
    Sink poly(a.polygons);
    io::write_polygons(tess, ps, poly.stream());
    poly.close();
  }
  if (tess.jittered() > 0) std::fprintf(stderr, "displaced %zu duplicate sites\n", tess.jittered());
  return 0;
}

struct GtestArgs {
  std::string in;
  std::string out;
};

int run_gtest(const GtestArgs& a) {
  const auto courses = io::read_time_courses(a.in);
  Sink sink(a.out);
  auto& out = sink.stream();
  out << "id,g,pvalue,n\n";
  std::size_t incomplete = 0;
  std::size_t constant = 0;
  for (const auto& tc : courses) {
    if (std::any_of(tc.values.begin(), tc.values.end(), [](double v) { return std::isnan(v); })) {
      ++incomplete;
      continue;
    }
    try {
      const auto r = periodicity::fisher_g(tc);
      out << csv::escape(tc.id) << ',' << csv::format_number(r.g) << ',' << csv::format_number(r.p_value) << ','
          << tc.values.size() << '\n';
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ConstantSeries) throw;
      ++constant;
    }
  }
  sink.close();
  if (incomplete) std::fprintf(stderr, "skipped %zu genes with missing measurements\n", incomplete);
  if (constant) std::fprintf(stderr, "skipped %zu constant genes\n", constant);
  return 0;
}

struct ReportArgs {
  std::string in;
  std::string out;
};

int run_report(const ReportArgs& a) {
  const auto report = io::read_report(a.in);
  Sink sink(a.out);
  io::render_summary(report, sink.stream());
  sink.close();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Voronoi-tessellation FDR control for vectors of p-values"};
  app.set_version_flag("--version", VFDR_VERSION);
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze_cmd = app.add_subcommand("analyze", "Combine p-vectors and apply a multiple-testing rule");
  analyze_cmd->add_option("input,--in", an.in, "CSV with header id,p1,p2[,p3]")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--ordering", an.ordering, "Ordering scheme")
      ->check(CLI::IsMember({"euclidean", "maximum", "summation", "delichtenberg"}))
      ->capture_default_str();
  analyze_cmd->add_option("--method", an.method, "bh | spacings-bh | empirical-null")
      ->check(CLI::IsMember({"bh", "spacings-bh", "empirical-null"}))
      ->capture_default_str();
  analyze_cmd->add_option("--alpha", an.opts.alpha, "BH level")->capture_default_str();
  analyze_cmd->add_option("--fdr-cutoff", an.opts.fdr_cutoff, "Left-tail FDR cutoff")->capture_default_str();
  analyze_cmd->add_option("--null-J", an.opts.null_components, "Mixture components (2 or 3)")->capture_default_str();
  analyze_cmd->add_option("--null-P", an.opts.null_penalty, "Null-weight penalty")->capture_default_str();
  analyze_cmd->add_option("--seed", an.opts.seed, "Seed for jitter and EM restarts")->capture_default_str();
  analyze_cmd->add_flag("--jitter-duplicates", an.opts.jitter_duplicates, "Displace duplicate p-vectors by 1e-12");
  analyze_cmd->add_option("--dims", an.opts.dims, "2 or 3")->check(CLI::IsMember({2, 3}))->capture_default_str();
  analyze_cmd->add_option("--out", an.out, "Report path (default stdout)");

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run a seeded simulation study");
  simulate_cmd->add_option("--config", sim.config, "Study configuration (TOML)")->check(CLI::ExistingFile);
  simulate_cmd->add_option("--out", sim.out, "Results CSV (default stdout)");
  simulate_cmd->add_option("--seed", sim.seed, "Override the configured seed");
  simulate_cmd->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");
  simulate_cmd->add_option("--reps", sim.reps, "Override the replicate count")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--pvalue-convention", sim.convention, "twosided | paper-literal")
      ->check(CLI::IsMember({"twosided", "paper-literal"}));
  simulate_cmd->add_option("--dataset-out", sim.dataset_out, "Also write replicate 0 p-vectors (first rho)");

  VoronoiArgs vor;
  auto* voronoi_cmd = app.add_subcommand("voronoi", "Dump Voronoi cell areas and polygons");
  voronoi_cmd->add_option("input,--in", vor.in, "CSV with header id,p1,p2")->required()->check(CLI::ExistingFile);
  voronoi_cmd->add_option("--out", vor.out, "Areas CSV (default stdout)");
  voronoi_cmd->add_option("--polygons", vor.polygons, "Polygon vertices CSV");
  voronoi_cmd->add_flag("--jitter-duplicates", vor.jitter, "Displace duplicate points by 1e-12");
  voronoi_cmd->add_option("--seed", vor.seed, "Jitter seed")->capture_default_str();

  GtestArgs gt;
  auto* gtest_cmd = app.add_subcommand("gtest", "Fisher's G periodicity test per gene");
  gtest_cmd->add_option("input,--in", gt.in, "CSV: id column then one column per time point")
      ->required()
      ->check(CLI::ExistingFile);
  gtest_cmd->add_option("--out", gt.out, "Output CSV (default stdout)");

  ReportArgs rep;
  auto* report_cmd = app.add_subcommand("report", "Summarise a saved analysis report");
  report_cmd->add_option("input,--in", rep.in, "Report written by analyze")->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--out", rep.out, "Summary path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*analyze_cmd) return run_analyze(an);
    if (*simulate_cmd) return run_simulate(sim);
    if (*voronoi_cmd) return run_voronoi(vor);
    if (*gtest_cmd) return run_gtest(gt);
    if (*report_cmd) return run_report(rep);
  } catch (const Error& e) {
    std::fprintf(stderr, "voronoi-fdr: %s\n", e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "voronoi-fdr: %s\n", e.what());
    return 1;
  }
  return 0;
}
