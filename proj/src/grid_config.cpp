#include "protorecon/grid_config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <string>

namespace protorecon {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_scalar(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("config: bad value for " + std::string(key) + ": '" +
                                std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw std::invalid_argument("config: bad boolean for " + std::string(key) + ": '" +
                              std::string(text) + "'");
}

template <typename T, typename Parse>
std::vector<T> parse_list(std::string_view text, Parse&& parse) {
  std::vector<T> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    const auto item = trim(text.substr(start, comma - start));
    if (!item.empty()) out.push_back(parse(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

void apply_config_value(GridConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "master_seed") {
    cfg.master_seed = parse_scalar<std::uint64_t>(key, value);
  } else if (key == "n_list") {
    cfg.n_list = parse_list<std::size_t>(value, [&](auto v) { return parse_scalar<std::size_t>(key, v); });
  } else if (key == "datasets_per_n") {
    cfg.datasets_per_n = parse_scalar<std::size_t>(key, value);
  } else if (key == "inits_per_dataset") {
    cfg.inits_per_dataset = parse_scalar<std::size_t>(key, value);
  } else if (key == "masks") {
    cfg.masks = parse_list<std::string>(value, [](auto v) { return Mask::parse(v).str(); });
  } else if (key == "lambda") {
    cfg.lambda = parse_scalar<double>(key, value);
  } else if (key == "tau") {
    cfg.tau = parse_scalar<double>(key, value);
  } else if (key == "epochs") {
    cfg.epochs = parse_scalar<int>(key, value);
  } else if (key == "lr") {
    cfg.lr = parse_scalar<double>(key, value);
  } else if (key == "output_dir") {
    cfg.output_dir = std::string(value);
  } else if (key == "jobs") {
    cfg.jobs = parse_scalar<unsigned>(key, value);
  } else if (key == "literal_seed_tuple") {
    cfg.literal_seed_tuple = parse_bool(key, value);
  } else if (key == "record_timing") {
    cfg.record_timing = parse_bool(key, value);
  } else if (key == "dump_all_prototypes") {
    cfg.dump_all_prototypes = parse_bool(key, value);
  } else if (key == "taus") {
    cfg.taus = parse_list<double>(value, [&](auto v) { return parse_scalar<double>(key, v); });
  } else if (key == "sweep_n") {
    cfg.sweep_n = parse_scalar<std::size_t>(key, value);
  } else {
    throw std::invalid_argument("config: unknown key '" + std::string(key) + "'");
  }
}

void load_config(GridConfig& cfg, std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) + " has no '='");
    }
    try {
      apply_config_value(cfg, trim(text.substr(0, eq)), text.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string(e.what()) + " (line " + std::to_string(line_no) + ")");
    }
  }
}

void load_config_file(GridConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  load_config(cfg, in);
}

}  // namespace protorecon
