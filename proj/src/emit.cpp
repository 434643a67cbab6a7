#include <fstream>
#include <functional>
#include <set>
#include <stdexcept>

#include "protorecon/harness.hpp"
#include "protorecon/records_csv.hpp"
#include "protorecon/report.hpp"

namespace protorecon {

namespace {

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  body(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_significance(std::ostream& os, std::size_t n, const stats::PairwiseMatrix& m) {
  os << "# N=" << n << "  '+' significant after Holm at alpha=" << csv::format_double(m.alpha)
     << ", '-' not significant, '=' self\n";
  os << m.render() << '\n';
  os << "pair,test,p_raw,p_holm\n";
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    for (std::size_t j = i + 1; j < m.labels.size(); ++j) {
      os << m.labels[i] << '-' << m.labels[j] << ','
         << (m.tests[i][j] == stats::TestKind::welch ? "welch" : "mann-whitney") << ','
         << csv::format_double(m.raw_p[i][j]) << ',' << csv::format_double(m.adjusted_p[i][j])
         << '\n';
    }
  }
}

}  // namespace

void emit_outputs(const OutputBundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  write_file(dir / "runs.csv", [&](std::ostream& os) { csv::write_runs(os, bundle.runs); });
  write_file(dir / "summary.csv", [&](std::ostream& os) { csv::write_summary(os, bundle.summaries); });
  write_file(dir / "effect.csv", [&](std::ostream& os) { csv::write_effects(os, bundle.effects); });
  write_file(dir / "family_fit.csv",
             [&](std::ostream& os) { csv::write_family_fit(os, bundle.family_fit); });
  write_file(dir / "tau_sweep.csv",
             [&](std::ostream& os) { csv::write_runs(os, bundle.tau_runs, true); });
  write_file(dir / "tau_summary.csv",
             [&](std::ostream& os) { csv::write_summary(os, bundle.tau_summaries, true); });
  for (const auto& [n, matrix] : bundle.matrices) {
    write_file(dir / ("significance_" + std::to_string(n) + ".txt"),
               [&](std::ostream& os) { write_significance(os, n, matrix); });
  }
  std::set<std::pair<std::size_t, std::size_t>> datasets;
  for (const auto& dump : bundle.prototypes) {
    write_file(dir / ("prototypes_" + std::to_string(dump.n) + "_" + dump.mask + ".csv"),
               [&](std::ostream& os) { csv::write_prototypes(os, dump); });
    if (datasets.emplace(dump.n, dump.run.dataset_id).second) {
      write_file(dir / ("dataset_" + std::to_string(dump.n) + "_" +
                        std::to_string(dump.run.dataset_id) + ".csv"),
                 [&](std::ostream& os) { csv::write_dataset(os, dump.dataset); });
    }
  }
  write_file(dir / "tables.md", [&](std::ostream& os) { os << render_tables(bundle); });
}

}  // namespace protorecon
