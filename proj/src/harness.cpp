#include "protorecon/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace protorecon {

namespace {

const std::array<std::string, 4> kOverlapFree{"000", "001", "010", "011"};
const std::array<std::string, 4> kOverlapActive{"100", "101", "110", "111"};

std::uint64_t dataset_hash(const Dataset& d) {
  std::string bytes(sizeof(double) * (d.x.size() + d.y.size()), '\0');
  std::memcpy(bytes.data(), d.x.data(), sizeof(double) * d.x.size());
  std::memcpy(bytes.data() + sizeof(double) * d.x.size(), d.y.data(), sizeof(double) * d.y.size());
  return fnv1a64(bytes);
}

SeedContext seed_context(const GridConfig& cfg, const RunSpec& spec) {
  return SeedContext{cfg.master_seed, spec.n,   spec.dataset_id,
                     spec.init_id,    spec.mask, cfg.literal_seed_tuple};
}

unsigned worker_count(const GridConfig& cfg, std::size_t tasks) {
  unsigned jobs = cfg.jobs != 0 ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(tasks, 1)));
}

struct TaskResult {
  RunRecord record;
  std::uint64_t data_hash = 0;
};

// Executes every spec on a small worker pool. Results land at the spec's
// index, so ordering never depends on scheduling.
std::vector<RunRecord> execute_all(const GridConfig& cfg, const std::vector<RunSpec>& specs) {
  std::vector<TaskResult> results(specs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= specs.size()) return;
      try {
        auto outcome = execute_run(cfg, specs[idx]);
        results[idx] = TaskResult{std::move(outcome.record), dataset_hash(outcome.dataset)};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(specs.size());
      }
    }
  };

  const unsigned workers = worker_count(cfg, specs.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> seen;
  std::vector<RunRecord> records;
  records.reserve(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto key = std::make_pair(specs[i].n, specs[i].dataset_id);
    const auto [it, inserted] = seen.emplace(key, results[i].data_hash);
    if (!inserted && it->second != results[i].data_hash) {
      throw std::runtime_error("grid: dataset (n=" + std::to_string(specs[i].n) + ", id=" +
                               std::to_string(specs[i].dataset_id) + ") differs between runs");
    }
    records.push_back(std::move(results[i].record));
  }
  canonical_sort(records);
  return records;
}

std::vector<const RunRecord*> cell(std::span<const RunRecord> records, std::size_t n,
                                   const std::string& mask) {
  std::vector<const RunRecord*> out;
  for (const auto& r : records) {
    if (r.n == n && r.mask == mask) out.push_back(&r);
  }
  return out;
}

std::vector<double> cell_errors(std::span<const RunRecord> records, std::size_t n,
                                const std::string& mask) {
  std::vector<double> out;
  for (const auto* r : cell(records, n, mask)) out.push_back(r->E);
  return out;
}

std::set<std::size_t> sizes(std::span<const RunRecord> records) {
  std::set<std::size_t> out;
  for (const auto& r : records) out.insert(r.n);
  return out;
}

}  // namespace

void GridConfig::validate() const {
  if (n_list.empty()) throw std::invalid_argument("grid: n_list is empty");
  for (auto n : n_list) {
    if (n < 2) throw std::invalid_argument("grid: every n must be at least 2");
  }
  if (datasets_per_n == 0 || inits_per_dataset == 0) {
    throw std::invalid_argument("grid: datasets_per_n and inits_per_dataset must be positive");
  }
  if (masks.empty()) throw std::invalid_argument("grid: no masks");
  for (const auto& m : masks) (void)Mask::parse(m);
  if (sweep_n < 2) throw std::invalid_argument("grid: sweep_n must be at least 2");
  for (double t : taus) {
    if (!(t > 0.0)) throw std::invalid_argument("grid: taus must be positive");
  }
  train_config(Mask{}, tau).validate();
}

TrainConfig GridConfig::train_config(const Mask& mask, double run_tau) const {
  TrainConfig tc;
  tc.epochs = epochs;
  tc.lr = lr;
  tc.loss.mask = mask;
  tc.loss.lambda_o = tc.loss.lambda_c = tc.loss.lambda_s = lambda;
  tc.loss.tau = run_tau;
  return tc;
}

bool canonical_less(const RunRecord& lhs, const RunRecord& rhs) {
  return std::tie(lhs.tau, lhs.n, lhs.dataset_id, lhs.init_id, lhs.mask) <
         std::tie(rhs.tau, rhs.n, rhs.dataset_id, rhs.init_id, rhs.mask);
}

void canonical_sort(std::vector<RunRecord>& records) {
  std::stable_sort(records.begin(), records.end(), canonical_less);
}

RunOutcome execute_run(const GridConfig& cfg, const RunSpec& spec) {
  const auto ctx = seed_context(cfg, spec);
  const Mask mask = Mask::parse(spec.mask);

  RunOutcome out;
  auto& rec = out.record;
  rec.n = spec.n;
  rec.dataset_id = spec.dataset_id;
  rec.init_id = spec.init_id;
  rec.mask = spec.mask;
  rec.tau = spec.tau;
  rec.dataset_seed = derive_seed(ctx, SeedPurpose::dataset);
  rec.init_seed = derive_seed(ctx, SeedPurpose::init);

  out.dataset = sample_dataset(spec.n, rec.dataset_seed);
  const auto tc = cfg.train_config(mask, spec.tau);
  out.trained = train(out.dataset, tc, rec.init_seed);
  const auto& p = out.trained.final_params;

  const auto loss = total_loss(p, out.dataset, tc.loss);
  out.metrics = compute_metrics(p, out.dataset);
  rec.E = out.metrics.recon_error;
  rec.S = out.metrics.specialization;
  rec.L_fit = loss.fit;
  rec.L_overlap = loss.overlap;
  rec.L_coverage = loss.coverage;
  rec.L_separation = loss.separation;
  rec.expelled_frac = out.metrics.expelled_frac;
  rec.hull_dist_mean = out.metrics.hull_dist_mean;
  rec.runtime_ms =
      cfg.record_timing
          ? std::chrono::duration<double, std::milli>(out.trained.elapsed).count()
          : 0.0;
  return out;
}

std::vector<RunRecord> run_grid(const GridConfig& cfg) {
  cfg.validate();
  std::vector<RunSpec> specs;
  specs.reserve(cfg.run_count());
  for (auto n : cfg.n_list) {
    for (std::size_t d = 0; d < cfg.datasets_per_n; ++d) {
      for (std::size_t i = 0; i < cfg.inits_per_dataset; ++i) {
        for (const auto& m : cfg.masks) specs.push_back(RunSpec{n, d, i, m, cfg.tau});
      }
    }
  }
  return execute_all(cfg, specs);
}

std::vector<RunRecord> run_tau_sweep(const GridConfig& cfg, std::span<const double> taus) {
  cfg.validate();
  std::vector<RunSpec> specs;
  for (double t : taus) {
    if (!(t > 0.0)) throw std::invalid_argument("tau sweep: taus must be positive");
    for (std::size_t d = 0; d < cfg.datasets_per_n; ++d) {
      for (std::size_t i = 0; i < cfg.inits_per_dataset; ++i) {
        specs.push_back(RunSpec{cfg.sweep_n, d, i, "001", t});
      }
    }
  }
  return execute_all(cfg, specs);
}

Moments moments(std::span<const double> values) {
  Moments m;
  if (values.empty()) return m;
  m.mean = stats::mean(values);
  m.std = stats::sample_sd(values);
  m.sem = m.std / std::sqrt(static_cast<double>(values.size()));
  return m;
}

std::vector<SummaryCell> summarize(std::span<const RunRecord> records) {
  std::map<std::tuple<double, std::size_t, std::string>, std::vector<RunRecord>> groups;
  for (const auto& r : records) groups[{r.tau, r.n, r.mask}].push_back(r);

  std::vector<SummaryCell> cells;
  cells.reserve(groups.size());
  for (auto& [key, runs] : groups) {
    canonical_sort(runs);
    SummaryCell c;
    std::tie(c.tau, c.n, c.mask) = key;
    auto column = [&](double RunRecord::*field) {
      std::vector<double> v;
      v.reserve(runs.size());
      for (const auto& r : runs) v.push_back(r.*field);
      return moments(v);
    };
    c.E = column(&RunRecord::E);
    c.S = column(&RunRecord::S);
    c.L_fit = column(&RunRecord::L_fit);
    c.L_overlap = column(&RunRecord::L_overlap);
    c.L_coverage = column(&RunRecord::L_coverage);
    c.L_separation = column(&RunRecord::L_separation);
    c.expelled_frac = column(&RunRecord::expelled_frac);
    c.hull_dist_mean = column(&RunRecord::hull_dist_mean);
    c.runs = std::move(runs);
    cells.push_back(std::move(c));
  }
  return cells;
}

std::vector<EffectRow> effect_table(std::span<const RunRecord> records) {
  std::vector<EffectRow> rows;
  for (auto n : sizes(records)) {
    const auto base = cell_errors(records, n, "000");
    const auto cov = cell_errors(records, n, "010");
    if (base.empty() || cov.empty()) {
      throw std::invalid_argument("effect_table: missing 000 or 010 cell at n=" + std::to_string(n));
    }
    rows.push_back(EffectRow{n, stats::mean(base), stats::mean(cov), stats::effect_size(base, cov)});
  }
  return rows;
}

std::vector<FamilyFitRow> family_fit_table(std::span<const RunRecord> records) {
  std::vector<FamilyFitRow> rows;
  for (auto n : sizes(records)) {
    auto family_mean = [&](const std::array<std::string, 4>& family) {
      std::vector<double> v;
      for (const auto& m : family) {
        for (const auto* r : cell(records, n, m)) v.push_back(r->L_fit);
      }
      return stats::mean(v);
    };
    FamilyFitRow row;
    row.n = n;
    row.overlap_free = family_mean(kOverlapFree);
    row.overlap_active = family_mean(kOverlapActive);
    row.ratio = row.overlap_active / row.overlap_free;
    rows.push_back(row);
  }
  return rows;
}

RunRecord select_median_run(std::span<const RunRecord> records, std::size_t n,
                            const std::string& mask) {
  auto runs = cell(records, n, mask);
  if (runs.empty()) {
    throw std::invalid_argument("select_median_run: empty cell n=" + std::to_string(n) +
                                " mask=" + mask);
  }
  std::sort(runs.begin(), runs.end(), [](const RunRecord* a, const RunRecord* b) {
    return std::tie(a->E, a->dataset_id, a->init_id) < std::tie(b->E, b->dataset_id, b->init_id);
  });
  return *runs[(runs.size() + 1) / 2 - 1];
}

std::map<std::size_t, stats::PairwiseMatrix> significance_by_n(std::span<const RunRecord> records,
                                                               double alpha) {
  std::map<std::size_t, stats::PairwiseMatrix> out;
  std::vector<std::string> labels;
  for (const auto& m : Mask::all()) labels.push_back(m.str());
  for (auto n : sizes(records)) {
    std::vector<std::vector<double>> groups;
    bool complete = true;
    for (const auto& label : labels) {
      groups.push_back(cell_errors(records, n, label));
      if (groups.back().size() < 2) complete = false;
    }
    if (complete) out.emplace(n, stats::significance_matrix(labels, groups, alpha));
  }
  return out;
}

std::vector<PrototypeDump> prototype_dumps(const GridConfig& cfg, std::span<const RunRecord> records) {
  std::vector<std::pair<std::size_t, std::string>> wanted;
  if (cfg.dump_all_prototypes) {
    std::set<std::pair<std::size_t, std::string>> cells;
    for (const auto& r : records) cells.emplace(r.n, r.mask);
    wanted.assign(cells.begin(), cells.end());
  } else {
    wanted = {{5, "000"}, {5, "010"}, {5, "111"}, {100, "000"}, {100, "010"}, {100, "100"}};
  }
  std::vector<PrototypeDump> dumps;
  for (const auto& [n, mask] : wanted) {
    if (cell(records, n, mask).empty()) continue;
    const auto median = select_median_run(records, n, mask);
    auto outcome = execute_run(cfg, RunSpec{n, median.dataset_id, median.init_id, mask, median.tau});
    PrototypeDump dump;
    dump.n = n;
    dump.mask = mask;
    dump.run = median;
    const auto& p = outcome.trained.final_params;
    dump.x_hat = prototypes(p);
    for (double xh : dump.x_hat) dump.y_hat.push_back(forward(p, xh));
    dump.mean_activation = outcome.metrics.mean_activations;
    dump.reconstruction = reconstruct(p);
    dump.dataset = std::move(outcome.dataset);
    dumps.push_back(std::move(dump));
  }
  return dumps;
}

OutputBundle analyze(std::vector<RunRecord> runs, std::vector<RunRecord> tau_runs) {
  OutputBundle b;
  canonical_sort(runs);
  canonical_sort(tau_runs);
  b.runs = std::move(runs);
  b.tau_runs = std::move(tau_runs);
  b.summaries = summarize(b.runs);
  b.tau_summaries = summarize(b.tau_runs);

  bool effects_defined = !b.runs.empty();
  for (auto n : sizes(b.runs)) {
    if (cell(b.runs, n, "000").empty() || cell(b.runs, n, "010").empty()) effects_defined = false;
  }
  if (effects_defined) b.effects = effect_table(b.runs);
  b.family_fit = family_fit_table(b.runs);
  b.matrices = significance_by_n(b.runs);
  return b;
}

}  // namespace protorecon
