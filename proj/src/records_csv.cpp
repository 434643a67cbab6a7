#include "protorecon/records_csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace protorecon::csv {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_no) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw std::runtime_error("runs csv: bad number '" + std::string(field) + "' on line " +
                             std::to_string(line_no));
  }
  return value;
}

void write_record(std::ostream& os, const RunRecord& r, bool with_tau) {
  if (with_tau) os << format_double(r.tau) << ',';
  os << r.n << ',' << r.dataset_id << ',' << r.init_id << ',' << r.mask << ',' << r.dataset_seed
     << ',' << r.init_seed << ',' << format_double(r.E) << ',' << format_double(r.S) << ','
     << format_double(r.L_fit) << ',' << format_double(r.L_overlap) << ','
     << format_double(r.L_coverage) << ',' << format_double(r.L_separation) << ','
     << format_double(r.expelled_frac) << ',' << format_double(r.hull_dist_mean) << ','
     << format_double(r.runtime_ms) << '\n';
}

void write_moments(std::ostream& os, const Moments& m, bool with_sem) {
  os << ',' << format_double(m.mean) << ',' << format_double(m.std);
  if (with_sem) os << ',' << format_double(m.sem);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_runs(std::ostream& os, std::span<const RunRecord> records, bool with_tau) {
  if (with_tau) os << "tau,";
  os << kRunsHeader << '\n';
  for (const auto& r : records) write_record(os, r, with_tau);
}

std::vector<RunRecord> read_runs(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("runs csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  bool with_tau = false;
  if (line == std::string("tau,") + kRunsHeader) {
    with_tau = true;
  } else if (line != kRunsHeader) {
    throw std::runtime_error("runs csv: unexpected header '" + line + "'");
  }
  const std::size_t columns = 15 + (with_tau ? 1 : 0);

  std::vector<RunRecord> out;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != columns) {
      throw std::runtime_error("runs csv: expected " + std::to_string(columns) + " fields on line " +
                               std::to_string(line_no));
    }
    std::size_t k = 0;
    RunRecord r;
    if (with_tau) r.tau = parse_number<double>(f[k++], line_no);
    r.n = parse_number<std::size_t>(f[k++], line_no);
    r.dataset_id = parse_number<std::size_t>(f[k++], line_no);
    r.init_id = parse_number<std::size_t>(f[k++], line_no);
    r.mask = std::string(f[k++]);
    try {
      (void)Mask::parse(r.mask);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(std::string(e.what()) + " on line " + std::to_string(line_no));
    }
    r.dataset_seed = parse_number<std::uint64_t>(f[k++], line_no);
    r.init_seed = parse_number<std::uint64_t>(f[k++], line_no);
    for (double RunRecord::*field :
         {&RunRecord::E, &RunRecord::S, &RunRecord::L_fit, &RunRecord::L_overlap,
          &RunRecord::L_coverage, &RunRecord::L_separation, &RunRecord::expelled_frac,
          &RunRecord::hull_dist_mean, &RunRecord::runtime_ms}) {
      r.*field = parse_number<double>(f[k++], line_no);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RunRecord> read_runs_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return read_runs(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_summary(std::ostream& os, std::span<const SummaryCell> cells, bool with_tau) {
  if (with_tau) os << "tau,";
  os << "n,mask,k,mean_E,std_E,sem_E,mean_S,std_S,sem_S,mean_L_fit,std_L_fit,mean_L_overlap,"
        "std_L_overlap,mean_L_coverage,std_L_coverage,mean_L_separation,std_L_separation,"
        "mean_expelled_frac,std_expelled_frac,mean_hull_dist,std_hull_dist\n";
  for (const auto& c : cells) {
    if (with_tau) os << format_double(c.tau) << ',';
    os << c.n << ',' << c.mask << ',' << c.runs.size();
    write_moments(os, c.E, true);
    write_moments(os, c.S, true);
    write_moments(os, c.L_fit, false);
    write_moments(os, c.L_overlap, false);
    write_moments(os, c.L_coverage, false);
    write_moments(os, c.L_separation, false);
    write_moments(os, c.expelled_frac, false);
    write_moments(os, c.hull_dist_mean, false);
    os << '\n';
  }
}

void write_effects(std::ostream& os, std::span<const EffectRow> rows) {
  os << "n,E_000,E_010,delta_E,rel_reduction_pct,cohen_d\n";
  for (const auto& r : rows) {
    os << r.n << ',' << format_double(r.mean_baseline) << ',' << format_double(r.mean_coverage)
       << ',' << format_double(r.effect.delta_e) << ',' << format_double(r.effect.rel_reduction_pct)
       << ',' << format_double(r.effect.cohen_d) << '\n';
  }
}

void write_family_fit(std::ostream& os, std::span<const FamilyFitRow> rows) {
  os << "n,L_fit_overlap_free,L_fit_overlap_active,ratio\n";
  for (const auto& r : rows) {
    os << r.n << ',' << format_double(r.overlap_free) << ',' << format_double(r.overlap_active)
       << ',' << format_double(r.ratio) << '\n';
  }
}

void write_prototypes(std::ostream& os, const PrototypeDump& dump) {
  os << "n,mask,dataset_id,init_id,E,unit,x_hat,y_hat,mean_activation\n";
  for (std::size_t j = 0; j < dump.x_hat.size(); ++j) {
    os << dump.n << ',' << dump.mask << ',' << dump.run.dataset_id << ',' << dump.run.init_id << ','
       << format_double(dump.run.E) << ',' << j << ',' << format_double(dump.x_hat[j]) << ','
       << format_double(dump.y_hat[j]) << ',' << format_double(dump.mean_activation[j]) << '\n';
  }
}

void write_dataset(std::ostream& os, const Dataset& d) {
  os << "i,x,y\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    os << i << ',' << format_double(d.x[i]) << ',' << format_double(d.y[i]) << '\n';
  }
}

}  // namespace protorecon::csv
