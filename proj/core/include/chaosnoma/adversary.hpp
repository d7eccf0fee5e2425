#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "chaosnoma/channel.hpp"
#include "chaosnoma/chaos.hpp"
#include "chaosnoma/config.hpp"
#include "chaosnoma/demodulator.hpp"
#include "chaosnoma/feature.hpp"

namespace chaosnoma {

// How the adversary turns intercepted waveforms into training labels.
enum class BootstrapMethod : std::uint8_t { kTwoClusterSummary = 0 };

// Everything the adversary controls: how many observed bits she trains on,
// the labeling method, her own channel conditions, and training settings
// mirroring the legitimate receiver's.
struct EveConfig {
  std::size_t intercept_count = 4096;
  BootstrapMethod bootstrap_method = BootstrapMethod::kTwoClusterSummary;
  ChannelProfile eve_channel;
  TrainSettings training;
  Hyperparams hyperparams;
  double reference_power = 1.0;
  std::uint64_t seed = 0;  // root of all adversary-side randomness
};

// One overheard block: the waveform at the adversary's antenna plus her own
// (perfect) views of her per-stream channels.
struct EveIntercept {
  std::vector<std::complex<double>> rx;
  std::vector<ReceiverChannelView> views;
};

// 2-D summary used for unsupervised labeling: the asymmetry of the projected
// time row (the two chaotic maps have visibly different amplitude skew) and
// the spectral centroid of the PSD row.
struct FeatureSummary {
  double time_skewness = 0.0;
  double spectral_centroid = 0.0;
};

FeatureSummary summarize_feature(const FeatureTensor& feature);

// Unsupervised pseudo-labels: per-sample 2-D summaries, standardized per
// dimension, partitioned by 2-means (fixed 50 iterations, init seeded from
// `seed`).  Labels are cluster indices, so the assignment is only defined up
// to a global flip.  Requires >= 2 samples; throws when every summary is
// identical (nothing to separate).
std::vector<Bit> bootstrap_labels(const std::vector<FeatureTensor>& features,
                                  std::uint64_t seed);

// First-stage feature of each intercept (the adversary cannot peel stages she
// has not decoded, so she learns from the composite signal).
std::vector<FeatureTensor> intercept_features(
    const std::vector<EveIntercept>& intercepts);

// Trains a fresh demodulator on (features, labels).
DemodulatorModel eve_train(const EveConfig& config,
                           const std::vector<FeatureTensor>& features,
                           const std::vector<Bit>& labels, std::size_t beta,
                           std::size_t n_vehicles);

// Runs the adversary's cancellation receiver over every intercept and scores
// raw per-vehicle BER against the true bits — no correction for the label
// flip, because the adversary has no oracle to resolve it.
std::vector<double> eve_score(const EveConfig& config, DemodulatorModel& model,
                              const std::vector<EveIntercept>& intercepts,
                              const std::vector<std::vector<Bit>>& truth_bits,
                              std::size_t threads = 0);

// The full attack: bootstrap pseudo-labels from the first intercept_count
// observations, train, then score over all intercepts.
std::vector<double> eve_train_and_score(
    const EveConfig& config, const std::vector<EveIntercept>& intercepts,
    const std::vector<std::vector<Bit>>& truth_bits, std::size_t threads = 0);

}  // namespace chaosnoma
