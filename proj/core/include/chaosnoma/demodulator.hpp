#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "chaosnoma/chaos.hpp"
#include "chaosnoma/config.hpp"
#include "chaosnoma/demod_net.hpp"
#include "chaosnoma/feature.hpp"
#include "chaosnoma/rng.hpp"

namespace chaosnoma {

// The deployable demodulator: the network plus the geometry it was built for.
// Copyable so evaluation workers can own private instances.
struct DemodulatorModel {
  std::size_t beta = 0;
  Hyperparams hyperparams;
  DemodNet<float> net;
};

// Builds a freshly initialized model.  Deterministic for a fixed init_seed.
DemodulatorModel build_model(std::size_t beta, const Hyperparams& hyperparams,
                             std::uint64_t init_seed);

// Row-normalizes a copy of the feature, runs the network in inference mode,
// and applies the posterior decision rule.  Exact ties resolve to bit 0.
// Returns (bit, class probabilities).
std::pair<Bit, std::array<double, 2>> demodulate(DemodulatorModel& model,
                                                 const FeatureTensor& feature);

// One supervised example: the stage-s feature of a simulated block, labeled
// with that stage's true bit.
struct TrainingSample {
  FeatureTensor feature;
  Bit label = 0;
  std::size_t sic_stage = 1;  // 1..n_vehicles
  double snr_db = 0.0;
};

struct Dataset {
  std::vector<TrainingSample> samples;
  std::size_t n_vehicles = 0;
  std::size_t beta = 0;
};

// Monte Carlo dataset: for each sample, simulate a full block at a training
// SNR drawn uniformly from the configured range, pick a cancellation stage
// uniformly, peel earlier stages with ground-truth bits (teacher forcing,
// fresh reconstruction seeds), and emit the stage feature with the true bit
// as label.  Sample i draws from its own stream derived from `seed`, so the
// result is independent of thread count.
Dataset generate_dataset(const ExperimentConfig& config, std::uint64_t seed,
                         std::size_t threads = 0);

// Per-epoch training record.
struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
  double learning_rate = 0.0;
};

// Mini-batch training with a held-out validation split, Adam updates, and
// plateau-triggered learning-rate decay.  The model is left holding the
// weights (and normalization statistics) of the best validation-loss epoch.
std::vector<EpochStats> train(DemodulatorModel& model, const Dataset& dataset,
                              const TrainSettings& settings,
                              std::uint64_t seed);

// Weights go to `path`; the geometry needed to rebuild the network goes to a
// structured-text sidecar at `path` + ".meta".
void save_model(const DemodulatorModel& model, const std::string& path);
DemodulatorModel load_model(const std::string& path);

// Binary dataset container (little-endian, 64-bit payload); round-trips are
// bit-exact.
void save_dataset(const Dataset& dataset, const std::string& path);
Dataset load_dataset(const std::string& path);

}  // namespace chaosnoma
