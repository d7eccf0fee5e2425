// Tests for the experiment configuration parser and its validation rules.
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "chaosnoma/config.hpp"
#include "doctest.h"

using namespace chaosnoma;

namespace {

const char* kFullConfig = R"ini(
# Full experiment description with a comment on every other line.
[system]
vehicles = 4
beta = 64            # chips per bit
scenario = rayleigh
profiles = 1, 2, 3, 4
reference_power = 2.0
csi_rho = 0.95

[sweep]
snr_db = 12, 16, 20, 24
bits_per_point = 50000
rho_grid = 1.0, 0.95, 0.85

[train]
epochs = 12
samples = 60000
batch = 64
lr = 0.0005
snr_low_db = 22
snr_high_db = 26
val_split = 0.2

[eve]
intercepts = 2048
epochs = 4
profile = 2

[run]
master_seed = 77
out_dir = results/full
)ini";

}  // namespace

TEST_CASE("a full configuration parses field by field") {
  const auto cfg = parse_config_text(kFullConfig);
  CHECK(cfg.n_vehicles == 4);
  CHECK(cfg.beta == 64);
  CHECK(cfg.scenario == Scenario::kRayleighProfile);
  CHECK(cfg.rayleigh_profiles == std::vector<int>{1, 2, 3, 4});
  CHECK(cfg.reference_power == doctest::Approx(2.0));
  CHECK(cfg.csi_rho == doctest::Approx(0.95));
  CHECK(cfg.snr_grid_db == std::vector<double>{12.0, 16.0, 20.0, 24.0});
  CHECK(cfg.bits_per_point == 50000);
  CHECK(cfg.rho_grid == std::vector<double>{1.0, 0.95, 0.85});
  CHECK(cfg.train.epochs == 12);
  CHECK(cfg.train.samples == 60000);
  CHECK(cfg.train.batch == 64);
  CHECK(cfg.train.lr == doctest::Approx(5e-4));
  CHECK(cfg.train.snr_low_db == doctest::Approx(22.0));
  CHECK(cfg.train.snr_high_db == doctest::Approx(26.0));
  CHECK(cfg.train.val_split == doctest::Approx(0.2));
  CHECK(cfg.eve.intercepts == 2048);
  CHECK(cfg.eve.epochs == 4);
  CHECK(cfg.eve.profile == 2);
  CHECK(cfg.master_seed == 77);
  CHECK(cfg.out_dir == "results/full");
}

TEST_CASE("scenario names map to the channel families") {
  const char* tmpl = R"ini(
[system]
vehicles = 1
beta = 16
scenario = %SCEN%
[sweep]
snr_db = 10
bits_per_point = 1000
)ini";
  auto with_scenario = [&](const std::string& name) {
    std::string text = tmpl;
    text.replace(text.find("%SCEN%"), 6, name);
    return parse_config_text(text);
  };
  CHECK(with_scenario("awgn").scenario == Scenario::kAwgnOnly);
  CHECK(with_scenario("v2i-primary").scenario == Scenario::kV2iPrimary);
  CHECK(with_scenario("v2i-auxiliary").scenario == Scenario::kV2iAuxiliary);
  CHECK_THROWS_AS((void)with_scenario("urban"), std::invalid_argument);
}

TEST_CASE("parser rejects unknown structure") {
  CHECK_THROWS_AS((void)parse_config_text("[system]\nwheels = 4\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)parse_config_text("[garage]\nvehicles = 4\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)parse_config_text("[system\nvehicles = 4\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)parse_config_text("[system]\nvehicles 4\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)parse_config_text("[system]\nbeta = twelve\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)parse_config_text("[system]\ncsi_rho = 0.9x\n"),
                  std::invalid_argument);
}

TEST_CASE("validation rules") {
  auto base = []() {
    ExperimentConfig cfg;
    cfg.n_vehicles = 2;
    cfg.beta = 32;
    cfg.scenario = Scenario::kRayleighProfile;
    cfg.rayleigh_profiles = {1, 2};
    cfg.snr_grid_db = {10.0, 14.0};
    cfg.bits_per_point = 1000;
    return cfg;
  };
  CHECK_NOTHROW(validate_config(base()));

  auto cfg = base();
  cfg.beta = 7;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);

  cfg = base();
  cfg.snr_grid_db = {14.0, 10.0};
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);

  cfg = base();
  cfg.snr_grid_db.clear();
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);

  cfg = base();
  cfg.bits_per_point = 999;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);

  cfg = base();
  cfg.rayleigh_profiles = {1};
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);

  cfg = base();
  cfg.rayleigh_profiles = {1, 5};
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);

  cfg = base();
  cfg.csi_rho = 1.2;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);

  cfg = base();
  cfg.rho_grid = {1.0, -0.1};
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);

  cfg = base();
  cfg.train.batch = 1;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);

  cfg = base();
  cfg.train.samples = 10;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);

  cfg = base();
  cfg.train.val_split = 1.0;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);

  cfg = base();
  cfg.train.snr_low_db = 30.0;
  cfg.train.snr_high_db = 20.0;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);

  cfg = base();
  cfg.eve.profile = 9;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);

  // The no-fading scenario needs no profile list.
  cfg = base();
  cfg.scenario = Scenario::kAwgnOnly;
  cfg.rayleigh_profiles.clear();
  CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("profiles follow the scenario and the adversary mirror rule") {
  auto cfg = parse_config_text(kFullConfig);
  const auto profiles = vehicle_profiles(cfg);
  REQUIRE(profiles.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(profiles[i].scenario == Scenario::kRayleighProfile);
    CHECK(profiles[i].power_gains ==
          rayleigh_profile(cfg.rayleigh_profiles[i]).power_gains);
  }

  // Explicit adversary profile id wins.
  const auto eve = eve_profile(cfg);
  CHECK(eve.power_gains == rayleigh_profile(2).power_gains);

  // profile = 0 mirrors the weakest-priority legitimate profile.
  cfg.eve.profile = 0;
  const auto mirrored = eve_profile(cfg);
  CHECK(mirrored.power_gains ==
        rayleigh_profile(cfg.rayleigh_profiles.back()).power_gains);
}

TEST_CASE("files load through the same path") {
  const auto path =
      std::filesystem::temp_directory_path() / "chaosnoma_config_test.ini";
  {
    std::ofstream os(path);
    os << kFullConfig;
  }
  const auto cfg = load_config(path.string());
  CHECK(cfg.n_vehicles == 4);
  std::error_code ec;
  std::filesystem::remove(path, ec);
  CHECK_THROWS_AS((void)load_config("/nonexistent/config.ini"),
                  std::runtime_error);
}
