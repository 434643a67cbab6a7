#pragma once

// CSV persistence. Column order is fixed; doubles use the shortest
// representation that round-trips exactly.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "protorecon/harness.hpp"

namespace protorecon::csv {

inline constexpr const char* kRunsHeader =
    "n,dataset_id,init_id,mask,dataset_seed,init_seed,E,S,L_fit,L_overlap,L_coverage,"
    "L_separation,expelled_frac,hull_dist_mean,runtime_ms";

std::string format_double(double v);

/// runs.csv layout; with_tau prepends a tau column (tau_sweep.csv layout).
void write_runs(std::ostream& os, std::span<const RunRecord> records, bool with_tau = false);

/// Reads either layout (detected from the header). Throws std::runtime_error
/// with the offending line number on malformed input.
std::vector<RunRecord> read_runs(std::istream& is);
std::vector<RunRecord> read_runs_file(const std::filesystem::path& path);

void write_summary(std::ostream& os, std::span<const SummaryCell> cells, bool with_tau = false);
void write_effects(std::ostream& os, std::span<const EffectRow> rows);
void write_family_fit(std::ostream& os, std::span<const FamilyFitRow> rows);
void write_prototypes(std::ostream& os, const PrototypeDump& dump);
void write_dataset(std::ostream& os, const Dataset& d);

}  // namespace protorecon::csv
