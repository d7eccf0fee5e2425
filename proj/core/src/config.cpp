#include "chaosnoma/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace chaosnoma {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

[[noreturn]] void bad_key(const std::string& section, const std::string& key) {
  throw std::invalid_argument("config: unknown key [" + section + "] " + key);
}

double parse_double(const std::string& section, const std::string& key,
                    const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (...) {
    throw std::invalid_argument("config: bad number for [" + section + "] " +
                                key + ": " + value);
  }
}

std::uint64_t parse_u64(const std::string& section, const std::string& key,
                        const std::string& value) {
  std::uint64_t v = 0;
  const auto [p, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || p != value.data() + value.size())
    throw std::invalid_argument("config: bad integer for [" + section + "] " +
                                key + ": " + value);
  return v;
}

Scenario parse_scenario(const std::string& value) {
  if (value == "awgn") return Scenario::kAwgnOnly;
  if (value == "rayleigh") return Scenario::kRayleighProfile;
  if (value == "v2i-primary") return Scenario::kV2iPrimary;
  if (value == "v2i-auxiliary") return Scenario::kV2iAuxiliary;
  throw std::invalid_argument("config: unknown scenario: " + value);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  cfg.snr_grid_db.clear();
  std::string section;
  std::istringstream lines(text);
  std::string raw;
  while (std::getline(lines, raw)) {
    std::string line = raw;
    const std::size_t comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config: malformed section: " + raw);
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value: " + raw);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (section == "system") {
      if (key == "vehicles") cfg.n_vehicles = parse_u64(section, key, value);
      else if (key == "beta") cfg.beta = parse_u64(section, key, value);
      else if (key == "scenario") cfg.scenario = parse_scenario(value);
      else if (key == "profiles") {
        cfg.rayleigh_profiles.clear();
        for (const auto& item : split(value, ','))
          cfg.rayleigh_profiles.push_back(
              static_cast<int>(parse_u64(section, key, item)));
      } else if (key == "reference_power")
        cfg.reference_power = parse_double(section, key, value);
      else if (key == "csi_rho") cfg.csi_rho = parse_double(section, key, value);
      else bad_key(section, key);
    } else if (section == "sweep") {
      if (key == "snr_db") {
        cfg.snr_grid_db.clear();
        for (const auto& item : split(value, ','))
          cfg.snr_grid_db.push_back(parse_double(section, key, item));
      } else if (key == "bits_per_point")
        cfg.bits_per_point = parse_u64(section, key, value);
      else if (key == "rho_grid") {
        cfg.rho_grid.clear();
        for (const auto& item : split(value, ','))
          cfg.rho_grid.push_back(parse_double(section, key, item));
      } else bad_key(section, key);
    } else if (section == "train") {
      if (key == "epochs") cfg.train.epochs = parse_u64(section, key, value);
      else if (key == "samples") cfg.train.samples = parse_u64(section, key, value);
      else if (key == "batch") cfg.train.batch = parse_u64(section, key, value);
      else if (key == "lr") cfg.train.lr = parse_double(section, key, value);
      else if (key == "snr_low_db")
        cfg.train.snr_low_db = parse_double(section, key, value);
      else if (key == "snr_high_db")
        cfg.train.snr_high_db = parse_double(section, key, value);
      else if (key == "val_split")
        cfg.train.val_split = parse_double(section, key, value);
      else bad_key(section, key);
    } else if (section == "eve") {
      if (key == "intercepts") cfg.eve.intercepts = parse_u64(section, key, value);
      else if (key == "epochs") cfg.eve.epochs = parse_u64(section, key, value);
      else if (key == "profile")
        cfg.eve.profile = static_cast<int>(parse_u64(section, key, value));
      else bad_key(section, key);
    } else if (section == "run") {
      if (key == "master_seed") cfg.master_seed = parse_u64(section, key, value);
      else if (key == "out_dir") cfg.out_dir = value;
      else bad_key(section, key);
    } else {
      throw std::invalid_argument("config: unknown section: " + section);
    }
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config_text(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.n_vehicles < 1)
    throw std::invalid_argument("config: vehicles must be >= 1");
  if (cfg.beta < 8) throw std::invalid_argument("config: beta must be >= 8");
  if (cfg.snr_grid_db.empty())
    throw std::invalid_argument("config: snr grid must be nonempty");
  if (!std::is_sorted(cfg.snr_grid_db.begin(), cfg.snr_grid_db.end()))
    throw std::invalid_argument("config: snr grid must be sorted ascending");
  if (cfg.bits_per_point < 1000)
    throw std::invalid_argument("config: bits_per_point must be >= 1000");
  if (!(cfg.reference_power > 0.0))
    throw std::invalid_argument("config: reference_power must be > 0");
  if (!(cfg.csi_rho >= 0.0) || cfg.csi_rho > 1.0)
    throw std::invalid_argument("config: csi_rho must lie in [0, 1]");
  for (double r : cfg.rho_grid)
    if (!(r >= 0.0) || r > 1.0)
      throw std::invalid_argument("config: rho_grid values must lie in [0, 1]");
  if (cfg.scenario == Scenario::kRayleighProfile) {
    if (cfg.rayleigh_profiles.size() != cfg.n_vehicles)
      throw std::invalid_argument(
          "config: rayleigh scenario needs one profile id per vehicle");
    for (int id : cfg.rayleigh_profiles)
      if (id < 1 || id > 4)
        throw std::invalid_argument("config: profile ids must be 1..4");
  }
  if (cfg.train.batch < 2)
    throw std::invalid_argument("config: train batch must be >= 2");
  if (cfg.train.epochs < 1)
    throw std::invalid_argument("config: train epochs must be >= 1");
  if (cfg.train.samples < cfg.train.batch)
    throw std::invalid_argument("config: train samples must cover one batch");
  if (!(cfg.train.val_split > 0.0) || !(cfg.train.val_split < 1.0))
    throw std::invalid_argument("config: val_split must lie in (0, 1)");
  if (!(cfg.train.snr_high_db >= cfg.train.snr_low_db))
    throw std::invalid_argument("config: train snr range inverted");
  if (cfg.eve.profile != 0 && (cfg.eve.profile < 1 || cfg.eve.profile > 4))
    throw std::invalid_argument("config: eve profile must be 0 (mirror) or 1..4");
}

std::vector<ChannelProfile> vehicle_profiles(const ExperimentConfig& cfg) {
  std::vector<ChannelProfile> out;
  out.reserve(cfg.n_vehicles);
  for (std::size_t i = 0; i < cfg.n_vehicles; ++i) {
    switch (cfg.scenario) {
      case Scenario::kAwgnOnly:
        out.push_back(awgn_profile());
        break;
      case Scenario::kRayleighProfile:
        out.push_back(rayleigh_profile(cfg.rayleigh_profiles[i]));
        break;
      case Scenario::kV2iPrimary:
      case Scenario::kV2iAuxiliary:
        out.push_back(v2i_profile(cfg.scenario));
        break;
    }
  }
  return out;
}

ChannelProfile eve_profile(const ExperimentConfig& cfg) {
  switch (cfg.scenario) {
    case Scenario::kAwgnOnly:
      return awgn_profile();
    case Scenario::kRayleighProfile:
      // Default: mirror the best-placed legitimate vehicle's profile family.
      return rayleigh_profile(cfg.eve.profile != 0
                                  ? cfg.eve.profile
                                  : cfg.rayleigh_profiles.back());
    case Scenario::kV2iPrimary:
    case Scenario::kV2iAuxiliary:
      return v2i_profile(cfg.scenario);
  }
  throw std::invalid_argument("eve_profile: unknown scenario");
}

}  // namespace chaosnoma
