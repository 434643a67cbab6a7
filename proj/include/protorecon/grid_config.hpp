#pragma once

// Flat "key = value" configuration files mirroring GridConfig. Blank lines
// and lines starting with '#' are ignored. List values are comma separated.
//
//   master_seed = 42
//   n_list = 3, 5, 10, 30, 50, 100
//   masks = 000, 010
//   taus = 0.001, 0.01, 0.1, 1, 10

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "protorecon/harness.hpp"

namespace protorecon {

/// Applies one key to cfg. Throws std::invalid_argument for an unknown key
/// or an unparsable value.
void apply_config_value(GridConfig& cfg, std::string_view key, std::string_view value);

void load_config(GridConfig& cfg, std::istream& is);
void load_config_file(GridConfig& cfg, const std::filesystem::path& path);

}  // namespace protorecon
