// Acceptance suite: trains the default grid and the tau sweep, then prints
// one PASS/FAIL line per criterion. Exit status is 0 only if all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fd_oracle.hpp"
#include "protorecon/assignment.hpp"
#include "protorecon/harness.hpp"
#include "protorecon/records_csv.hpp"
#include "protorecon/stats.hpp"
#include "protorecon/theory.hpp"
#include "stats_fixtures.hpp"
#include "stats_oracles.hpp"
#include "test_support.hpp"

using namespace protorecon;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool overlap_active(const std::string& mask) { return mask[0] == '1'; }

class Grid {
 public:
  explicit Grid(std::span<const RunRecord> runs) {
    for (const auto& c : summarize(runs)) cells_[{c.n, c.mask}] = c;
  }
  const SummaryCell& at(std::size_t n, const std::string& mask) const { return cells_.at({n, mask}); }
  double E(std::size_t n, const std::string& m) const { return at(n, m).E.mean; }

 private:
  std::map<std::pair<std::size_t, std::string>, SummaryCell> cells_;
};

const std::vector<std::size_t> kSizes{3, 5, 10, 30, 50, 100};
const std::vector<std::string> kMasks{"000", "001", "010", "011", "100", "101", "110", "111"};

Outcome ranking(const Grid& g, double grid_seconds) {
  std::string fails;
  for (std::size_t n : kSizes) {
    for (const auto& m : kMasks)
      if (m != "010" && g.E(n, m) <= g.E(n, "010")) fails += fmt(" N=%zu:%s<=010", n, m.c_str());
    if (n < 10) continue;
    double free_max = 0.0, active_min = 1e300;
    for (const auto& m : kMasks) {
      if (overlap_active(m)) active_min = std::min(active_min, g.E(n, m));
      else free_max = std::max(free_max, g.E(n, m));
    }
    if (active_min < 1.15 * free_max) fails += fmt(" N=%zu:gap=%.1f%%", n, 100 * (active_min / free_max - 1));
  }
  if (grid_seconds > 300.0) fails += fmt(" runtime=%.1fs", grid_seconds);
  return {fails.empty(), fails.empty() ? fmt("010 lowest at every N, family gap >= 15%% at N>=10, grid %.1fs single core", grid_seconds)
                                       : "violations:" + fails};
}

Outcome error_bands(const Grid& g) {
  const std::vector<double> target{0.478, 0.574, 0.658, 0.664, 0.697, 0.729};
  std::string values, fails;
  for (std::size_t i = 0; i < kSizes.size(); ++i) {
    const double e = g.E(kSizes[i], "010");
    values += fmt(" %.3f", e);
    if (std::abs(e - target[i]) > 0.15) fails += fmt(" 010@N=%zu", kSizes[i]);
  }
  values += " | 100:";
  for (std::size_t n : {30u, 50u, 100u}) {
    const double e = g.E(n, "100");
    values += fmt(" %.3f", e);
    if (e < 0.95 || e > 1.25) fails += fmt(" 100@N=%zu", n);
  }
  return {fails.empty(), "010:" + values + (fails.empty() ? "" : " violations:" + fails)};
}

Outcome expulsion(const Grid& g) {
  double active_min = 1.0, free_max = 0.0;
  for (std::size_t n : kSizes)
    for (const auto& m : kMasks) {
      const double f = g.at(n, m).expelled_frac.mean;
      if (!overlap_active(m)) free_max = std::max(free_max, f);
      else if (n >= 30) active_min = std::min(active_min, f);
    }
  return {active_min >= 0.95 && free_max <= 0.75,
          fmt("overlap-active min at N>=30 = %.3f (>= 0.95), overlap-free max = %.3f (<= 0.75)", active_min, free_max)};
}

Outcome specialization(const Grid& g) {
  const double s100 = g.at(100, "111").S.mean, s30 = g.at(30, "111").S.mean;
  std::string fails;
  for (std::size_t n : kSizes)
    if (n >= 5 && !(g.at(n, "010").S.mean > g.at(n, "000").S.mean)) fails += fmt(" N=%zu", n);
  return {s100 <= 0.03 && s30 <= 0.08 && fails.empty(),
          fmt("S(111) N=100 %.3f, N=30 %.3f; S(010)>S(000) at N>=5: %s", s100, s30,
              fails.empty() ? "yes" : ("no at" + fails).c_str())};
}

Outcome fit_parity(std::span<const RunRecord> runs) {
  std::string values;
  bool ok = true;
  for (const auto& row : family_fit_table(runs)) {
    values += fmt(" %.3f", row.ratio);
    ok = ok && row.ratio >= 0.9 && row.ratio <= 1.2;
  }
  return {ok, "active/free L_fit ratio by N:" + values};
}

Outcome tau_monotone(std::span<const RunRecord> tau_runs) {
  std::vector<SummaryCell> cells = summarize(tau_runs);
  std::sort(cells.begin(), cells.end(), [](auto& a, auto& b) { return a.tau < b.tau; });
  const std::vector<double> want{0.001, 0.01, 0.1, 1.0, 10.0};
  if (cells.size() != want.size()) return {false, fmt("expected 5 tau cells, got %zu", cells.size())};
  bool ok = true;
  std::string frac, err;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    ok = ok && cells[i].tau == want[i] && cells[i].n == 30 && cells[i].mask == "001";
    frac += fmt(" %.2f", cells[i].expelled_frac.mean);
    err += fmt(" %.3f", cells[i].E.mean);
    if (i > 0) {
      ok = ok && cells[i].expelled_frac.mean >= cells[i - 1].expelled_frac.mean - 0.02;
      ok = ok && cells[i].E.mean >= cells[i - 1].E.mean - 0.05;
    }
  }
  const double rise = cells.back().E.mean - cells.front().E.mean;
  ok = ok && rise >= 0.5;
  return {ok, "expelled:" + frac + " | E:" + err + fmt(" | E(10)-E(0.001)=%.3f", rise)};
}

Outcome effect_shape(std::span<const RunRecord> runs) {
  std::map<std::size_t, double> d;
  for (const auto& row : effect_table(runs)) d[row.n] = row.effect.cohen_d;
  const bool ok = d[30] >= 0.8 && d[30] > d[3] && d[30] > d[100];
  std::string all;
  for (auto [n, v] : d) all += fmt(" N=%zu:%.2f", n, v);
  return {ok, "Cohen d (010 vs 000):" + all + " | need d(30)>=0.8 and d(30)>d(3), d(100)"};
}

Outcome significance_structure(std::span<const RunRecord> runs) {
  const auto mats = significance_by_n(runs);
  bool ok = true;
  std::string detail;
  for (std::size_t n : {30u, 50u}) {
    const auto it = mats.find(n);
    if (it == mats.end()) return {false, fmt("no matrix at N=%zu", n)};
    const auto& m = it->second;
    int cross_sig = 0, within_sig = 0;
    std::string within_pairs;
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = i + 1; j < 8; ++j) {
        const bool sig = m.verdicts[i][j] == stats::Verdict::significant;
        if (overlap_active(m.labels[i]) != overlap_active(m.labels[j])) {
          cross_sig += sig;
        } else if (sig) {
          ++within_sig;
          within_pairs += " " + m.labels[i] + "-" + m.labels[j];
        }
      }
    ok = ok && cross_sig == 16 && within_sig == 0;
    detail += fmt(" N=%zu: cross %d/16 significant, within %d/12 significant", n, cross_sig, within_sig);
    if (!within_pairs.empty()) detail += " (" + within_pairs.substr(1) + ")";
    detail += ";";
  }
  return {ok, detail.substr(1)};
}

Outcome gradient_oracle() {
  Rng rng(20261016);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.next_u64() % 12;
    auto [p, d] = testing::untied_triple(n, rng);
    LossConfig cfg;
    cfg.mask = Mask::all()[t % 8];
    cfg.lambda_o = cfg.lambda_c = cfg.lambda_s = t % 2 ? 0.01 : 1.0;
    cfg.tau = std::pow(10.0, rng.uniform(-2.0, 0.0));
    const auto cmp = testing::compare_gradients(grad_total(p, d, cfg), testing::fd_gradient(p, d, cfg));
    worst = std::max(worst, cmp.rel_error);
  }
  return {worst < 1e-5, fmt("200 triples, max relative error %.2e (< 1e-5)", worst)};
}

Outcome assignment_oracle() {
  Rng rng(77);
  int mismatches = 0;
  for (std::size_t n = 2; n <= 6; ++n)
    for (int t = 0; t < 1000; ++t) {
      CostMatrix c(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
          c(i, k) = t % 4 == 0 ? std::floor(rng.uniform(0.0, 5.0)) : rng.uniform(0.0, 10.0);
      const auto a = assign_min_cost(c);
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += c(i, a.row_to_col[i]);
      mismatches += s != testing::brute_force_min_cost(c);
    }
  return {mismatches == 0, fmt("5000 matrices (N=2..6), %d differ from brute force", mismatches)};
}

Outcome stats_oracles() {
  std::mt19937_64 g(31);
  int mw_bad = 0, mw_total = 0;
  for (std::size_t n = 1; n <= 7; ++n)
    for (int t = 0; t < 20; ++t) {
      std::vector<double> a(n), b(n);
      std::uniform_int_distribution<int> coarse(0, 3);
      std::normal_distribution<double> fine(0.0, 1.0);
      for (auto& v : a) v = t % 2 ? coarse(g) : fine(g);
      for (auto& v : b) v = t % 2 ? coarse(g) : fine(g) + 0.5;
      const auto r = stats::mann_whitney(a, b);
      ++mw_total;
      mw_bad += !r.exact || std::abs(r.p - testing::enumerate_mann_whitney(a, b)) > 1e-12;
    }
  int sw_bad = 0;
  for (const auto& c : fixtures::kShapiro) {
    const auto r = stats::shapiro_wilk(c.x);
    sw_bad += !r || std::abs(r->w - c.w) > 1e-3 || std::abs(r->p - c.p) > 1e-2;
  }
  int welch_bad = 0;
  for (const auto& c : fixtures::kWelch) {
    const auto r = stats::welch_t(c.a, c.b);
    welch_bad += !r || std::abs(r->p - c.p) > 1e-6;
  }
  int holm_bad = 0;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t m = 1 + g() % 28;
    std::vector<double> p(m);
    for (auto& v : p) v = std::pow(u(g), 2);
    const auto adj = stats::holm_correct(p);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return p[i] < p[j]; });
    bool ok = true;
    for (std::size_t i = 0; i < m; ++i) ok = ok && adj[i] >= p[i] && adj[i] <= 1.0;
    for (std::size_t k = 1; k < m; ++k) ok = ok && adj[order[k]] >= adj[order[k - 1]];
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), g);
    std::vector<double> q(m);
    for (std::size_t i = 0; i < m; ++i) q[i] = p[perm[i]];
    const auto adj_q = stats::holm_correct(q);
    for (std::size_t i = 0; i < m; ++i) ok = ok && adj_q[i] == adj[perm[i]];
    holm_bad += !ok;
  }
  const bool pass = mw_bad == 0 && sw_bad == 0 && welch_bad == 0 && holm_bad == 0;
  return {pass, fmt("MW exact vs enumeration %d/%d bad, SW fixtures %d/%zu bad, Welch fixtures %d/%zu bad, "
                    "Holm property failures %d/10000",
                    mw_bad, mw_total, sw_bad, fixtures::kShapiro.size(), welch_bad, fixtures::kWelch.size(), holm_bad)};
}

Outcome theorem_suites() {
  const auto c = theory::coverage_suite(10000, 1);
  const auto o = theory::overlap_suite(10000, 1);
  const auto s = theory::separation_suite(10000, 1);
  return {c.passed() && o.passed() && s.passed(),
          fmt("10^4 configs each; max violation coverage %.1e, overlap %.1e, separation %.1e (slack 1e-12)",
              c.max_violation, o.max_violation, s.max_violation)};
}

std::string serialize(std::span<const RunRecord> runs) {
  std::ostringstream os;
  csv::write_runs(os, runs);
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::uint64_t master_seed = kDefaultMasterSeed;
  unsigned jobs = 4;
  app.add_option("--master-seed", master_seed, "Grid master seed");
  app.add_option("--jobs", jobs, "Workers for the parallel determinism run");
  CLI11_PARSE(app, argc, argv);

  GridConfig cfg;
  cfg.master_seed = master_seed;
  cfg.jobs = 1;
  const auto start = std::chrono::steady_clock::now();
  const auto timed = run_grid(cfg);
  const double grid_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  cfg.record_timing = false;
  const auto serial = run_grid(cfg);
  cfg.jobs = jobs;
  const auto parallel = run_grid(cfg);
  const auto tau_runs = run_tau_sweep(cfg, cfg.taus);
  const Grid grid(serial);

  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"ranking", [&] { return ranking(grid, grid_seconds); }},
      {"error-bands", [&] { return error_bands(grid); }},
      {"expulsion", [&] { return expulsion(grid); }},
      {"specialization", [&] { return specialization(grid); }},
      {"fit-parity", [&] { return fit_parity(serial); }},
      {"tau-sweep", [&] { return tau_monotone(tau_runs); }},
      {"effect-size-shape", [&] { return effect_shape(serial); }},
      {"significance-structure", [&] { return significance_structure(serial); }},
      {"gradient-oracle", gradient_oracle},
      {"assignment-oracle", assignment_oracle},
      {"stats-oracles", stats_oracles},
      {"theorem-suites", theorem_suites},
      {"determinism",
       [&] {
         auto strip = timed;
         for (auto& r : strip) r.runtime_ms = 0.0;
         const bool bytes = serialize(serial) == serialize(parallel);
         const bool timed_same = strip == serial;
         return Outcome{bytes && timed_same && serial.size() == 480,
                        fmt("%zu runs; jobs=1 vs jobs=%u runs.csv byte-identical: %s; timed run equal except runtime_ms: %s",
                            serial.size(), jobs, bytes ? "yes" : "no", timed_same ? "yes" : "no")};
       }},
  };

  std::printf("master seed %llu\n", static_cast<unsigned long long>(master_seed));
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %-24s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
