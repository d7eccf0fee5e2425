#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chaosnoma/channel.hpp"

namespace chaosnoma {

// Training-run settings (one shared model across all SIC stages).
struct TrainSettings {
  std::size_t epochs = 20;      // 50 available as an override
  std::size_t samples = 100000;
  std::size_t batch = 64;
  double lr = 1e-3;
  double snr_low_db = 24.0;
  double snr_high_db = 28.0;
  double val_split = 0.1;
};

// Adversary settings; the eavesdropper trains her own model on intercepts.
struct EveSettings {
  std::size_t intercepts = 4096;  // blocks used to fit pseudo-labels
  std::size_t epochs = 6;
  int profile = 0;  // Rayleigh profile id for Eve's channel; 0 = mirror legit
};

// One experiment: system geometry, channel scenario, evaluation grids,
// training block, and reproducibility seed.
struct ExperimentConfig {
  std::size_t n_vehicles = 2;
  std::size_t beta = 32;
  Scenario scenario = Scenario::kRayleighProfile;
  std::vector<int> rayleigh_profiles;  // per-vehicle profile ids, 1..4
  double reference_power = 1.0;
  double csi_rho = 1.0;

  std::vector<double> snr_grid_db;  // sorted ascending
  std::size_t bits_per_point = 100000;  // decoded bits per vehicle per point
  std::vector<double> rho_grid = {1.0, 0.95, 0.85};

  std::uint64_t master_seed = 1;
  std::string out_dir = "results";

  TrainSettings train;
  EveSettings eve;
};

// Parses the key = value / [section] config format described in the README.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

// Enforces the documented invariants (beta >= 8, sorted nonempty SNR grid,
// bits_per_point >= 1000, profile list consistent with the scenario, ...).
void validate_config(const ExperimentConfig& config);

// Channel profile drawn for each vehicle under this configuration.
std::vector<ChannelProfile> vehicle_profiles(const ExperimentConfig& config);

// Eve's channel profile (her draws are independent of the legitimate ones).
ChannelProfile eve_profile(const ExperimentConfig& config);

}  // namespace chaosnoma
