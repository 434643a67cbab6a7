#include "protorecon/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace protorecon {

namespace {

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

struct Grid {
  std::vector<std::size_t> ns;
  std::vector<std::string> masks;
  std::map<std::pair<std::size_t, std::string>, const SummaryCell*> cells;
};

Grid index_cells(const std::vector<SummaryCell>& summaries) {
  Grid g;
  std::set<std::size_t> ns;
  std::set<std::string> masks;
  for (const auto& c : summaries) {
    ns.insert(c.n);
    masks.insert(c.mask);
    g.cells[{c.n, c.mask}] = &c;
  }
  g.ns.assign(ns.begin(), ns.end());
  g.masks.assign(masks.begin(), masks.end());
  return g;
}

void header(std::ostringstream& os, const std::string& first, const std::vector<std::string>& cols) {
  os << "| " << first << " |";
  for (const auto& c : cols) os << ' ' << c << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < cols.size(); ++i) os << "---:|";
  os << '\n';
}

// One row per N, one column per mask; `best` marks the row minimum in bold.
void per_mask_table(std::ostringstream& os, const Grid& g, Moments SummaryCell::*field, int digits,
                    bool bold_min) {
  header(os, "N", g.masks);
  for (auto n : g.ns) {
    double best = INFINITY;
    for (const auto& m : g.masks) {
      if (auto it = g.cells.find({n, m}); it != g.cells.end()) {
        best = std::min(best, (it->second->*field).mean);
      }
    }
    os << "| " << n << " |";
    for (const auto& m : g.masks) {
      auto it = g.cells.find({n, m});
      if (it == g.cells.end()) {
        os << " |";
        continue;
      }
      const double v = (it->second->*field).mean;
      const auto text = fixed(v, digits);
      os << ' ' << (bold_min && v == best ? "**" + text + "**" : text) << " |";
    }
    os << '\n';
  }
  os << '\n';
}

}  // namespace

std::string render_tables(const OutputBundle& bundle) {
  std::ostringstream os;
  os << "# Results\n\n";
  const auto grid = index_cells(bundle.summaries);

  if (!grid.cells.empty()) {
    os << "## Mean reconstruction error E (lower is better)\n\n";
    per_mask_table(os, grid, &SummaryCell::E, 3, true);
  }

  if (!bundle.effects.empty()) {
    os << "## Coverage-only (010) against the fit-only baseline (000)\n\n";
    header(os, "N", {"E_000", "E_010", "delta E", "rel. red. (%)", "Cohen d"});
    for (const auto& r : bundle.effects) {
      os << "| " << r.n << " | " << fixed(r.mean_baseline, 3) << " | " << fixed(r.mean_coverage, 3)
         << " | " << fixed(r.effect.delta_e, 3) << " | " << fixed(r.effect.rel_reduction_pct, 1)
         << " | " << fixed(r.effect.cohen_d, 2) << " |\n";
    }
    os << '\n';
  }

  if (!bundle.family_fit.empty()) {
    os << "## Mean L_fit by family\n\n";
    header(os, "N", {"overlap-free", "overlap-active", "ratio"});
    for (const auto& r : bundle.family_fit) {
      os << "| " << r.n << " | " << fixed(r.overlap_free, 4) << " | " << fixed(r.overlap_active, 4)
         << " | " << fixed(r.ratio, 3) << " |\n";
    }
    os << '\n';
  }

  if (!grid.cells.empty()) {
    os << "## Mean fraction of prototypes outside [0,1]\n\n";
    per_mask_table(os, grid, &SummaryCell::expelled_frac, 2, false);

    os << "## Specialization ratio S (mean +/- std)\n\n";
    std::vector<std::string> cols;
    for (auto n : grid.ns) cols.push_back("N=" + std::to_string(n));
    header(os, "mask", cols);
    for (const auto& m : grid.masks) {
      os << "| " << m << " |";
      for (auto n : grid.ns) {
        auto it = grid.cells.find({n, m});
        if (it == grid.cells.end()) {
          os << " |";
        } else {
          os << ' ' << fixed(it->second->S.mean, 3) << " +/- " << fixed(it->second->S.std, 3) << " |";
        }
      }
      os << '\n';
    }
    os << '\n';
  }

  if (!bundle.tau_summaries.empty()) {
    os << "## Tau sweep (mask 001)\n\n";
    header(os, "tau", {"N", "frac. expelled", "dist. from hull", "E", "S"});
    for (const auto& c : bundle.tau_summaries) {
      char tau[32];
      std::snprintf(tau, sizeof(tau), "%g", c.tau);
      os << "| " << tau << " | " << c.n << " | " << fixed(c.expelled_frac.mean, 2) << " | "
         << fixed(c.hull_dist_mean.mean, 2) << " | " << fixed(c.E.mean, 3) << " | "
         << fixed(c.S.mean, 3) << " |\n";
    }
    os << '\n';
  }

  if (!bundle.matrices.empty()) {
    os << "## Pairwise significance of E (Holm, alpha = 0.05)\n\n";
    for (const auto& [n, m] : bundle.matrices) {
      os << "N = " << n << "\n\n```\n" << m.render() << "```\n\n";
    }
  }
  return os.str();
}

}  // namespace protorecon
