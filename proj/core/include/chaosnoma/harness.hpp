#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "chaosnoma/config.hpp"
#include "chaosnoma/demodulator.hpp"
#include "chaosnoma/metrics.hpp"

namespace chaosnoma {

// One row of a BER table: vehicle is the 1-based cancellation stage (1 rides
// the weakest channel and largest power share).
struct BerRecord {
  double snr_db = 0.0;
  std::size_t vehicle = 0;
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
  double ber = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Security evaluation of one SNR point: per-vehicle legitimate records and
// adversary BER, plus the derived leakage and secrecy figures.
struct SecurityPoint {
  double snr_db = 0.0;
  std::vector<BerRecord> legit;
  std::vector<double> eve_ber;
  double leakage = 0.0;
  double secrecy = 0.0;
};

struct SecurityReport {
  std::vector<SecurityPoint> points;
};

// Robustness sweep result: per channel-knowledge quality, a full BER table.
using RobustnessResult = std::vector<std::pair<double, std::vector<BerRecord>>>;

// Monte-Carlo BER sweep: for every SNR point, simulate bits_per_point blocks,
// run the cancellation receiver, and accumulate per-vehicle errors.  Every
// block owns a dedicated random stream keyed by (point, block), so results
// are bit-identical for any thread count.
std::vector<BerRecord> run_ber_sweep(const ExperimentConfig& config,
                                     DemodulatorModel& model,
                                     std::size_t threads = 0);

// BER sweep plus a paired adversary arm: each block is also observed through
// independently drawn adversary channels, the adversary trains on her
// intercepts at each point, and leakage/secrecy are computed from both sides.
SecurityReport run_security_eval(const ExperimentConfig& config,
                                 DemodulatorModel& model,
                                 std::size_t threads = 0);

// The BER sweep repeated for each channel-knowledge quality in rho_list.
RobustnessResult run_robustness_sweep(const ExperimentConfig& config,
                                      DemodulatorModel& model,
                                      const std::vector<double>& rho_list,
                                      std::size_t threads = 0);

// CSV serialization.  Numbers print via shortest round-trip formatting, so
// equal results give byte-identical text.
std::string ber_csv(const std::vector<BerRecord>& records);
std::string security_csv(const SecurityReport& report);
std::string robustness_csv(const RobustnessResult& result);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace chaosnoma
