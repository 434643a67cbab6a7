#pragma once

// Experiment orchestration: the (N, dataset, init, mask) grid, the tau sweep
// on the separation-only mask, and aggregation into summary tables.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "protorecon/datagen.hpp"
#include "protorecon/losses.hpp"
#include "protorecon/metrics.hpp"
#include "protorecon/optim.hpp"
#include "protorecon/stats.hpp"

namespace protorecon {

inline constexpr std::uint64_t kDefaultMasterSeed = 42;

struct GridConfig {
  std::uint64_t master_seed = kDefaultMasterSeed;
  std::vector<std::size_t> n_list{3, 5, 10, 30, 50, 100};
  std::size_t datasets_per_n = 5;
  std::size_t inits_per_dataset = 2;
  std::vector<std::string> masks{"000", "001", "010", "011", "100", "101", "110", "111"};
  double lambda = 0.01;  // shared by all three structural terms
  double tau = 0.01;
  int epochs = 200;
  double lr = 1e-3;
  std::filesystem::path output_dir = "results";
  unsigned jobs = 0;  // 0: one worker per hardware thread
  bool literal_seed_tuple = false;
  bool record_timing = true;
  bool dump_all_prototypes = false;
  std::vector<double> taus{0.001, 0.01, 0.1, 1.0, 10.0};
  std::size_t sweep_n = 30;

  /// Throws std::invalid_argument on an unusable configuration.
  void validate() const;
  TrainConfig train_config(const Mask& mask, double tau) const;
  std::size_t run_count() const noexcept {
    return n_list.size() * masks.size() * datasets_per_n * inits_per_dataset;
  }
};

struct RunRecord {
  std::size_t n = 0;
  std::size_t dataset_id = 0;
  std::size_t init_id = 0;
  std::string mask = "000";
  std::uint64_t dataset_seed = 0;
  std::uint64_t init_seed = 0;
  double E = 0.0;
  double S = 0.0;
  double L_fit = 0.0;
  double L_overlap = 0.0;
  double L_coverage = 0.0;
  double L_separation = 0.0;
  double expelled_frac = 0.0;
  double hull_dist_mean = 0.0;
  double runtime_ms = 0.0;
  double tau = 0.0;  // temperature the run trained with; persisted only in sweep files

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Canonical order: tau, n, dataset_id, init_id, mask.
bool canonical_less(const RunRecord& lhs, const RunRecord& rhs);
void canonical_sort(std::vector<RunRecord>& records);

struct RunSpec {
  std::size_t n = 0;
  std::size_t dataset_id = 0;
  std::size_t init_id = 0;
  std::string mask = "000";
  double tau = 0.01;
};

/// A single replayable run: dataset, trained parameters, and its record.
struct RunOutcome {
  RunRecord record;
  Dataset dataset;
  TrainedRun trained;
  RunMetrics metrics;
};

RunOutcome execute_run(const GridConfig& cfg, const RunSpec& spec);

/// Every (n, dataset_id, init_id, mask) of cfg, in canonical order. Runs are
/// spread over cfg.jobs workers; the result does not depend on scheduling.
/// Throws std::runtime_error if the dataset of some (n, dataset_id) differs
/// between its runs.
std::vector<RunRecord> run_grid(const GridConfig& cfg);

/// Mask "001" at n = cfg.sweep_n, every (dataset_id, init_id) of cfg, for
/// each tau. Throws std::invalid_argument for a non-positive tau.
std::vector<RunRecord> run_tau_sweep(const GridConfig& cfg, std::span<const double> taus);

struct Moments {
  double mean = 0.0;
  double std = 0.0;  // sample sd
  double sem = 0.0;  // std / sqrt(k)
};

Moments moments(std::span<const double> values);

struct SummaryCell {
  std::size_t n = 0;
  std::string mask;
  double tau = 0.0;
  Moments E, S, L_fit, L_overlap, L_coverage, L_separation, expelled_frac, hull_dist_mean;
  std::vector<RunRecord> runs;  // canonical order
};

/// One cell per (tau, n, mask), ordered by that key.
std::vector<SummaryCell> summarize(std::span<const RunRecord> records);

struct EffectRow {
  std::size_t n = 0;
  double mean_baseline = 0.0;  // mask 000
  double mean_coverage = 0.0;  // mask 010
  stats::EffectSize effect;
};

/// Coverage-only (010) against the fit-only baseline (000) at every n
/// present. Throws std::invalid_argument if either cell is missing at some n.
std::vector<EffectRow> effect_table(std::span<const RunRecord> records);

struct FamilyFitRow {
  std::size_t n = 0;
  double overlap_free = 0.0;    // mean L_fit over 000, 001, 010, 011
  double overlap_active = 0.0;  // mean L_fit over 100, 101, 110, 111
  double ratio = 0.0;           // active / free
};

std::vector<FamilyFitRow> family_fit_table(std::span<const RunRecord> records);

/// Lower median by E (the ceil(k/2)-th smallest); ties broken by
/// (dataset_id, init_id). Throws std::invalid_argument for an empty cell.
RunRecord select_median_run(std::span<const RunRecord> records, std::size_t n,
                            const std::string& mask);

/// Pairwise significance of E across masks, one Holm family per n. Only
/// sizes where every mask cell is present with at least two runs appear.
std::map<std::size_t, stats::PairwiseMatrix> significance_by_n(std::span<const RunRecord> records,
                                                               double alpha = 0.05);

struct PrototypeDump {
  std::size_t n = 0;
  std::string mask;
  RunRecord run;
  Dataset dataset;
  Reconstruction reconstruction;
  std::vector<double> x_hat;            // unit order
  std::vector<double> y_hat;            // unit order
  std::vector<double> mean_activation;  // unit order
};

/// Median runs of the cells used for prototype figures (all cells when
/// cfg.dump_all_prototypes), replayed from their seeds.
std::vector<PrototypeDump> prototype_dumps(const GridConfig& cfg, std::span<const RunRecord> records);

struct OutputBundle {
  std::vector<RunRecord> runs;
  std::vector<RunRecord> tau_runs;
  std::vector<SummaryCell> summaries;
  std::vector<SummaryCell> tau_summaries;
  std::vector<EffectRow> effects;
  std::vector<FamilyFitRow> family_fit;
  std::map<std::size_t, stats::PairwiseMatrix> matrices;
  std::vector<PrototypeDump> prototypes;
};

/// Derives every table that is defined for the given records; tables whose
/// input cells are missing are left empty.
OutputBundle analyze(std::vector<RunRecord> runs, std::vector<RunRecord> tau_runs);

/// Writes runs.csv, summary.csv, effect.csv, family_fit.csv, tau_sweep.csv,
/// significance_<n>.txt, prototypes_<n>_<mask>.csv, dataset_<n>_<id>.csv and
/// tables.md. Throws std::runtime_error naming the path on I/O failure.
void emit_outputs(const OutputBundle& bundle, const std::filesystem::path& dir);

}  // namespace protorecon
