// Tests for the Monte-Carlo evaluation harness and its CSV serialization.
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "chaosnoma/harness.hpp"
#include "doctest.h"

using namespace chaosnoma;

namespace {

const Hyperparams kTinyHp{
    .filters = 4, .heads = 2, .head_dim = 3, .fc_hidden = 8};

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.n_vehicles = 1;
  cfg.beta = 8;
  cfg.scenario = Scenario::kAwgnOnly;
  cfg.snr_grid_db = {10.0};
  cfg.bits_per_point = 1000;
  cfg.master_seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("a single-point sweep produces one coherent record") {
  auto cfg = small_config();
  auto model = build_model(cfg.beta, kTinyHp, 3);
  const auto records = run_ber_sweep(cfg, model, 2);
  REQUIRE(records.size() == 1);
  const auto& r = records[0];
  CHECK(r.snr_db == 10.0);
  CHECK(r.vehicle == 1);
  CHECK(r.bits == 1000);
  CHECK(r.errors <= r.bits);
  CHECK(r.ber == doctest::Approx(static_cast<double>(r.errors) / 1000.0));
  const auto iv = wilson_interval(r.errors, r.bits);
  CHECK(r.ci_low == iv.low);
  CHECK(r.ci_high == iv.high);
}

TEST_CASE("record grid is snr-major then vehicle") {
  ExperimentConfig cfg;
  cfg.n_vehicles = 2;
  cfg.beta = 8;
  cfg.scenario = Scenario::kRayleighProfile;
  cfg.rayleigh_profiles = {1, 1};
  cfg.snr_grid_db = {8.0, 16.0};
  cfg.bits_per_point = 1000;
  cfg.master_seed = 9;
  auto model = build_model(cfg.beta, kTinyHp, 3);
  const auto records = run_ber_sweep(cfg, model, 2);
  REQUIRE(records.size() == 4);
  CHECK(records[0].snr_db == 8.0);
  CHECK(records[0].vehicle == 1);
  CHECK(records[1].snr_db == 8.0);
  CHECK(records[1].vehicle == 2);
  CHECK(records[2].snr_db == 16.0);
  CHECK(records[2].vehicle == 1);
  CHECK(records[3].snr_db == 16.0);
  CHECK(records[3].vehicle == 2);
}

TEST_CASE("sweeps are invariant to the worker count") {
  auto cfg = small_config();
  auto model = build_model(cfg.beta, kTinyHp, 3);
  const auto a = run_ber_sweep(cfg, model, 1);
  auto model2 = build_model(cfg.beta, kTinyHp, 3);
  const auto b = run_ber_sweep(cfg, model2, 3);
  CHECK(ber_csv(a) == ber_csv(b));

  // And deterministic across repeated runs.
  auto model3 = build_model(cfg.beta, kTinyHp, 3);
  const auto c = run_ber_sweep(cfg, model3, 2);
  CHECK(ber_csv(a) == ber_csv(c));

  // A different master seed draws different noise.
  auto cfg2 = cfg;
  cfg2.master_seed = 8;
  auto model4 = build_model(cfg.beta, kTinyHp, 3);
  const auto d = run_ber_sweep(cfg2, model4, 2);
  CHECK(ber_csv(a) != ber_csv(d));
}

TEST_CASE("model geometry must match the configured block length") {
  auto cfg = small_config();
  auto model = build_model(16, kTinyHp, 3);  // wrong beta on purpose
  CHECK_THROWS_AS((void)run_ber_sweep(cfg, model, 1), std::invalid_argument);
}

TEST_CASE("perfect-knowledge robustness row equals the plain sweep") {
  auto cfg = small_config();
  cfg.bits_per_point = 1000;
  auto model = build_model(cfg.beta, kTinyHp, 3);
  const auto plain = run_ber_sweep(cfg, model, 2);
  auto model2 = build_model(cfg.beta, kTinyHp, 3);
  const auto rob = run_robustness_sweep(cfg, model2, {1.0, 0.85}, 2);
  REQUIRE(rob.size() == 2);
  CHECK(rob[0].first == 1.0);
  CHECK(rob[1].first == 0.85);
  CHECK(ber_csv(rob[0].second) == ber_csv(plain));  // bit-identical
}

TEST_CASE("csv schemas carry the documented headers") {
  BerRecord r;
  r.snr_db = 12.0;
  r.vehicle = 1;
  r.bits = 1000;
  r.errors = 25;
  r.ber = 0.025;
  r.ci_low = 0.017;
  r.ci_high = 0.0366;
  const auto text = ber_csv({r});
  CHECK(text.rfind("snr_db,vehicle,bits,errors,ber,ci_low,ci_high\n", 0) == 0);
  CHECK(text.find("12,1,1000,25,0.025,0.017,0.0366\n") != std::string::npos);

  SecurityReport report;
  SecurityPoint p;
  p.snr_db = 12.0;
  p.legit = {r};
  p.eve_ber = {0.47};
  p.leakage = 0.0026;
  p.secrecy = 0.8;
  report.points = {p};
  const auto sec = security_csv(report);
  CHECK(sec.rfind("snr_db,vehicle,bits,errors,ber,ci_low,ci_high,"
                  "eve_ber,leakage,secrecy\n",
                  0) == 0);
  CHECK(sec.find(",0.47,") != std::string::npos);

  RobustnessResult rob;
  rob.push_back({0.95, {r}});
  const auto rtext = robustness_csv(rob);
  CHECK(rtext.rfind("snr_db,vehicle,bits,errors,ber,ci_low,ci_high,rho\n",
                    0) == 0);
  CHECK(rtext.find(",0.95\n") != std::string::npos);
}

TEST_CASE("numbers print in shortest round-trip form") {
  BerRecord r;
  r.snr_db = 12.5;
  r.vehicle = 2;
  r.bits = 3;
  r.errors = 1;
  r.ber = 1.0 / 3.0;
  r.ci_low = 0.1;
  r.ci_high = 0.2;
  const auto text = ber_csv({r});
  // 1/3 needs all 17 digits; 0.1 and 0.2 must print exactly as typed.
  CHECK(text.find("0.3333333333333333") != std::string::npos);
  CHECK(text.find("0.1,0.2") != std::string::npos);
  CHECK(text.find("0.30000") == std::string::npos);
}

TEST_CASE("text files are written verbatim") {
  const auto path =
      std::filesystem::temp_directory_path() / "chaosnoma_harness_file.csv";
  write_text_file(path.string(), "a,b\n1,2\n");
  std::ifstream is(path, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(is)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "a,b\n1,2\n");
  std::error_code ec;
  std::filesystem::remove(path, ec);
  CHECK_THROWS_AS(write_text_file("/nonexistent/dir/file.csv", "x"),
                  std::runtime_error);
}
