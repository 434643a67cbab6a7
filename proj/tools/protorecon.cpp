// protorecon: train the mask grid, sweep tau, and regenerate the result
// tables from persisted runs.
//
// Exit codes: 0 success, 1 usage error, 2 runtime or I/O failure,
// 3 a `check` suite found a violation.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "protorecon/grid_config.hpp"
#include "protorecon/harness.hpp"
#include "protorecon/records_csv.hpp"
#include "protorecon/report.hpp"
#include "protorecon/simd/kernels.hpp"
#include "protorecon/theory.hpp"

namespace fs = std::filesystem;
using namespace protorecon;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitCheckFailed = 3;

// Flag values that override the config file only when given.
struct GridFlags {
  std::string config;
  std::optional<std::uint64_t> master_seed;
  std::vector<std::size_t> n_list;
  std::optional<int> epochs;
  std::optional<double> lr;
  std::optional<double> lambda;
  std::optional<double> tau;
  std::optional<std::string> out;
  std::optional<unsigned> jobs;
  bool literal_seed_tuple = false;
  bool no_timing = false;
  bool dump_all = false;
  std::vector<double> taus;
  std::optional<std::size_t> sweep_n;
};

void add_grid_flags(CLI::App* cmd, GridFlags& f) {
  cmd->add_option("--config", f.config, "Flat key=value config file");
  cmd->add_option("--master-seed", f.master_seed, "Master seed for per-run seed derivation");
  cmd->add_option("--n", f.n_list, "Dataset sizes")->delimiter(',');
  cmd->add_option("--epochs", f.epochs, "Full-batch Adam steps per run");
  cmd->add_option("--lr", f.lr, "Adam learning rate");
  cmd->add_option("--lambda", f.lambda, "Shared structural-loss coefficient");
  cmd->add_option("--tau", f.tau, "Separation temperature");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--jobs", f.jobs, "Worker threads (0 = all cores)");
  cmd->add_flag("--literal-seed-tuple", f.literal_seed_tuple,
                "Include the mask in the init seed (unpairs mask comparisons)");
  cmd->add_flag("--no-timing", f.no_timing, "Write runtime_ms as 0 for byte-reproducible output");
  cmd->add_flag("--dump-all-prototypes", f.dump_all, "Dump median-run prototypes for every cell");
}

GridConfig resolve(const GridFlags& f) {
  GridConfig cfg;
  if (!f.config.empty()) load_config_file(cfg, f.config);
  if (f.master_seed) cfg.master_seed = *f.master_seed;
  if (!f.n_list.empty()) cfg.n_list = f.n_list;
  if (f.epochs) cfg.epochs = *f.epochs;
  if (f.lr) cfg.lr = *f.lr;
  if (f.lambda) cfg.lambda = *f.lambda;
  if (f.tau) cfg.tau = *f.tau;
  if (f.out) cfg.output_dir = *f.out;
  if (f.jobs) cfg.jobs = *f.jobs;
  if (f.literal_seed_tuple) cfg.literal_seed_tuple = true;
  if (f.no_timing) cfg.record_timing = false;
  if (f.dump_all) cfg.dump_all_prototypes = true;
  if (!f.taus.empty()) cfg.taus = f.taus;
  if (f.sweep_n) cfg.sweep_n = *f.sweep_n;
  cfg.validate();
  return cfg;
}

std::vector<RunRecord> read_optional_runs(const fs::path& path) {
  if (!fs::exists(path)) return {};
  return csv::read_runs_file(path);
}

fs::path runs_path(const fs::path& in) { return fs::is_directory(in) ? in / "runs.csv" : in; }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_grid(const GridFlags& flags) {
  const auto cfg = resolve(flags);
  const auto start = std::chrono::steady_clock::now();
  auto runs = run_grid(cfg);
  std::fprintf(stderr, "grid: %zu runs in %.2f s (simd=%s)\n", runs.size(), seconds_since(start),
               std::string(simd::to_string(simd::active_backend())).c_str());
  auto tau_runs = read_optional_runs(cfg.output_dir / "tau_sweep.csv");
  auto bundle = analyze(std::move(runs), std::move(tau_runs));
  bundle.prototypes = prototype_dumps(cfg, bundle.runs);
  emit_outputs(bundle, cfg.output_dir);
  std::fprintf(stderr, "grid: wrote %s\n", cfg.output_dir.string().c_str());
  return 0;
}

int cmd_tau_sweep(const GridFlags& flags) {
  const auto cfg = resolve(flags);
  const auto start = std::chrono::steady_clock::now();
  auto tau_runs = run_tau_sweep(cfg, cfg.taus);
  std::fprintf(stderr, "tau-sweep: %zu runs in %.2f s\n", tau_runs.size(), seconds_since(start));
  auto runs = read_optional_runs(cfg.output_dir / "runs.csv");
  auto bundle = analyze(std::move(runs), std::move(tau_runs));
  emit_outputs(bundle, cfg.output_dir);
  std::fprintf(stderr, "tau-sweep: wrote %s\n", cfg.output_dir.string().c_str());
  return 0;
}

int cmd_analyze(const fs::path& in, const std::optional<fs::path>& out) {
  const auto runs_file = runs_path(in);
  const auto dir = runs_file.parent_path().empty() ? fs::path(".") : runs_file.parent_path();
  auto runs = csv::read_runs_file(runs_file);
  auto tau_runs = read_optional_runs(dir / "tau_sweep.csv");
  const auto bundle = analyze(std::move(runs), std::move(tau_runs));
  emit_outputs(bundle, out.value_or(dir));
  return 0;
}

int cmd_report(const fs::path& in, const std::optional<fs::path>& out) {
  const auto runs_file = runs_path(in);
  const auto dir = runs_file.parent_path().empty() ? fs::path(".") : runs_file.parent_path();
  auto bundle = analyze(csv::read_runs_file(runs_file), read_optional_runs(dir / "tau_sweep.csv"));
  const auto text = render_tables(bundle);
  if (!out) {
    std::cout << text;
    return 0;
  }
  std::ofstream os(*out);
  if (!os || !(os << text)) throw std::runtime_error("cannot write " + out->string());
  return 0;
}

int cmd_check(std::size_t configs, std::uint64_t seed) {
  struct Suite {
    const char* name;
    theory::BoundReport (*run)(std::size_t, std::uint64_t, std::size_t);
  };
  const Suite suites[] = {
      {"coverage-monotone", &theory::coverage_suite},
      {"overlap-bound", &theory::overlap_suite},
      {"separation-bound", &theory::separation_suite},
  };
  bool all_passed = true;
  for (const auto& s : suites) {
    const auto r = s.run(configs, seed, 30);
    std::printf("%-18s %s  configs=%zu max_violation=%.3e worst_seed=%llu\n", s.name,
                r.passed() ? "PASS" : "FAIL", r.config_count, r.max_violation,
                static_cast<unsigned long long>(r.worst_config_seed));
    all_passed = all_passed && r.passed();
  }
  return all_passed ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian MLP prototype-reconstruction workbench"};
  app.require_subcommand(1);
  std::string simd_name = "auto";
  app.add_option("--simd", simd_name, "Kernel backend: auto, scalar, avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  GridFlags grid_flags;
  auto* grid = app.add_subcommand("grid", "Train the full (N, dataset, init, mask) grid");
  add_grid_flags(grid, grid_flags);

  GridFlags sweep_flags;
  auto* sweep = app.add_subcommand("tau-sweep", "Sweep tau on the separation-only mask");
  add_grid_flags(sweep, sweep_flags);
  sweep->add_option("--taus", sweep_flags.taus, "Temperatures")->delimiter(',');
  sweep->add_option("--sweep-n", sweep_flags.sweep_n, "Dataset size of the sweep");

  fs::path analyze_in = "results";
  std::optional<fs::path> analyze_out;
  auto* analyze_cmd = app.add_subcommand("analyze", "Recompute summaries and matrices from runs.csv");
  analyze_cmd->add_option("--in", analyze_in, "runs.csv or its directory");
  analyze_cmd->add_option("--out", analyze_out, "Output directory (default: input directory)");

  fs::path report_in = "results";
  std::optional<fs::path> report_out;
  auto* report = app.add_subcommand("report", "Render tables.md from runs.csv");
  report->add_option("--in", report_in, "runs.csv or its directory");
  report->add_option("--out", report_out, "Markdown file (default: stdout)");

  std::size_t check_configs = 10000;
  std::uint64_t check_seed = 1;
  auto* check = app.add_subcommand("check", "Run the numeric bound suites");
  check->add_option("--configs", check_configs, "Configurations per suite");
  check->add_option("--seed", check_seed, "Suite seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  if (auto backend = simd::parse_backend(simd_name); !backend || !simd::select_backend(*backend)) {
    std::fprintf(stderr, "error: simd backend '%s' is not available on this CPU\n", simd_name.c_str());
    return kExitUsage;
  }

  try {
    if (grid->parsed()) return cmd_grid(grid_flags);
    if (sweep->parsed()) return cmd_tau_sweep(sweep_flags);
    if (analyze_cmd->parsed()) return cmd_analyze(analyze_in, analyze_out);
    if (report->parsed()) return cmd_report(report_in, report_out);
    if (check->parsed()) return cmd_check(check_configs, check_seed);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
