#include "chaosnoma/adversary.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "chaosnoma/sic.hpp"
#include "chaosnoma/threading.hpp"

namespace chaosnoma {

namespace {

constexpr int kClusterIterations = 50;

double squared_distance(const std::array<double, 2>& a,
                        const std::array<double, 2>& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  return dx * dx + dy * dy;
}

}  // namespace

FeatureSummary summarize_feature(const FeatureTensor& feature) {
  FeatureSummary s;
  const std::size_t n = feature.beta;
  if (n == 0) throw std::invalid_argument("summarize_feature: empty feature");

  double mean = 0.0;
  for (double v : feature.time_row) mean += v;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0;
  for (double v : feature.time_row) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  s.time_skewness = (m2 > 0.0) ? m3 / std::pow(m2, 1.5) : 0.0;

  double weight = 0.0, moment = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    weight += feature.psd_row[k];
    moment += static_cast<double>(k) * feature.psd_row[k];
  }
  s.spectral_centroid = (weight > 0.0) ? moment / weight : 0.0;
  return s;
}

std::vector<Bit> bootstrap_labels(const std::vector<FeatureTensor>& features,
                                  std::uint64_t seed) {
  const std::size_t n = features.size();
  if (n < 2) throw std::invalid_argument("bootstrap_labels: need >= 2 samples");

  // Standardize each summary dimension so neither dominates the distance.
  std::vector<std::array<double, 2>> points(n);
  for (std::size_t i = 0; i < n; ++i) {
    const FeatureSummary s = summarize_feature(features[i]);
    points[i] = {s.time_skewness, s.spectral_centroid};
  }
  bool any_spread = false;
  for (std::size_t d = 0; d < 2; ++d) {
    double mean = 0.0;
    for (const auto& p : points) mean += p[d];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& p : points) var += (p[d] - mean) * (p[d] - mean);
    var /= static_cast<double>(n);
    const double sd = std::sqrt(var);
    if (sd > 1e-15) {
      any_spread = true;
      for (auto& p : points) p[d] = (p[d] - mean) / sd;
    } else {
      for (auto& p : points) p[d] = 0.0;
    }
  }
  if (!any_spread)
    throw std::invalid_argument("bootstrap_labels: all summaries identical");

  // 2-means: first center random, second the farthest point from it.
  RngStream rng = seed_stream(seed, stream_id(stream_purpose::kEveTrain, 0));
  std::array<std::array<double, 2>, 2> centers;
  centers[0] = points[rng.uniform_int(n)];
  std::size_t far = 0;
  double far_d = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = squared_distance(points[i], centers[0]);
    if (d > far_d) {
      far_d = d;
      far = i;
    }
  }
  centers[1] = points[far];

  std::vector<Bit> labels(n, 0);
  for (int it = 0; it < kClusterIterations; ++it) {
    for (std::size_t i = 0; i < n; ++i)
      labels[i] = squared_distance(points[i], centers[1]) <
                          squared_distance(points[i], centers[0])
                      ? Bit{1}
                      : Bit{0};
    std::array<std::array<double, 2>, 2> sums{};
    std::array<std::size_t, 2> counts{};
    for (std::size_t i = 0; i < n; ++i) {
      sums[labels[i]][0] += points[i][0];
      sums[labels[i]][1] += points[i][1];
      ++counts[labels[i]];
    }
    for (std::size_t c = 0; c < 2; ++c) {
      if (counts[c] == 0) {
        // Restart an empty cluster at the point farthest from the other one.
        const std::size_t other = 1 - c;
        std::size_t pick = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = squared_distance(points[i], centers[other]);
          if (d > best) {
            best = d;
            pick = i;
          }
        }
        centers[c] = points[pick];
      } else {
        centers[c] = {sums[c][0] / static_cast<double>(counts[c]),
                      sums[c][1] / static_cast<double>(counts[c])};
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    labels[i] = squared_distance(points[i], centers[1]) <
                        squared_distance(points[i], centers[0])
                    ? Bit{1}
                    : Bit{0};
  return labels;
}

std::vector<FeatureTensor> intercept_features(
    const std::vector<EveIntercept>& intercepts) {
  std::vector<FeatureTensor> out;
  out.reserve(intercepts.size());
  for (const EveIntercept& in : intercepts) {
    if (in.views.empty())
      throw std::invalid_argument("intercept_features: intercept has no views");
    out.push_back(build_feature(in.rx, dominant_tap(in.views[0])));
  }
  return out;
}

DemodulatorModel eve_train(const EveConfig& config,
                           const std::vector<FeatureTensor>& features,
                           const std::vector<Bit>& labels, std::size_t beta,
                           std::size_t n_vehicles) {
  if (features.empty())
    throw std::invalid_argument("eve_train: no training features");
  if (features.size() != labels.size())
    throw std::invalid_argument("eve_train: features/labels length mismatch");

  Dataset ds;
  ds.beta = beta;
  ds.n_vehicles = n_vehicles;
  ds.samples.resize(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    ds.samples[i].feature = features[i];
    ds.samples[i].label = labels[i];
    ds.samples[i].sic_stage = 1;
    ds.samples[i].snr_db = 0.0;
  }

  DemodulatorModel model = build_model(
      beta, config.hyperparams,
      derive_seed(config.seed, stream_id(stream_purpose::kInit, 0)));
  train(model, ds, config.training,
        derive_seed(config.seed, stream_id(stream_purpose::kEveTrain, 1)));
  return model;
}

std::vector<double> eve_score(const EveConfig& config, DemodulatorModel& model,
                              const std::vector<EveIntercept>& intercepts,
                              const std::vector<std::vector<Bit>>& truth_bits,
                              std::size_t threads) {
  const std::size_t blocks = intercepts.size();
  if (blocks == 0) throw std::invalid_argument("eve_score: no intercepts");
  if (truth_bits.size() != blocks)
    throw std::invalid_argument("eve_score: need truth bits per intercept");
  const std::size_t n = truth_bits[0].size();
  if (n == 0) throw std::invalid_argument("eve_score: empty truth vector");
  const PowerAllocation alloc = power_coefficients(n, config.reference_power);

  const std::size_t workers = resolve_threads(threads);
  std::vector<std::vector<std::uint64_t>> partial_errors;
  std::mutex collect;
  parallel_for(blocks, workers, [&](std::size_t begin, std::size_t end) {
    DemodulatorModel local = model;  // private caches for this worker
    std::vector<std::uint64_t> errors(n, 0);
    const DemodFn demod = [&local](const FeatureTensor& f) {
      return demodulate(local, f);
    };
    for (std::size_t b = begin; b < end; ++b) {
      if (truth_bits[b].size() != n)
        throw std::invalid_argument("eve_score: ragged truth bits");
      RngStream rng = seed_stream(
          config.seed, stream_id(stream_purpose::kEveBlock, b));
      const std::vector<Bit> decided =
          sic_receive(intercepts[b].rx, alloc, intercepts[b].views, demod, rng);
      for (std::size_t v = 0; v < n; ++v)
        if (decided[v] != truth_bits[b][v]) ++errors[v];
    }
    const std::lock_guard<std::mutex> lock(collect);
    partial_errors.push_back(std::move(errors));
  });

  std::vector<double> ber(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    std::uint64_t total = 0;
    for (const auto& part : partial_errors) total += part[v];
    ber[v] = static_cast<double>(total) / static_cast<double>(blocks);
  }
  return ber;
}

std::vector<double> eve_train_and_score(
    const EveConfig& config, const std::vector<EveIntercept>& intercepts,
    const std::vector<std::vector<Bit>>& truth_bits, std::size_t threads) {
  if (intercepts.empty())
    throw std::invalid_argument("eve_train_and_score: no intercepts");
  if (config.intercept_count < config.training.batch)
    throw std::invalid_argument(
        "eve_train_and_score: intercept_count below the training batch size");
  const std::size_t beta = intercepts[0].rx.size();
  const std::size_t n_vehicles =
      truth_bits.empty() ? 1 : truth_bits[0].size();

  std::vector<FeatureTensor> features = intercept_features(intercepts);
  const std::size_t train_count =
      std::min<std::size_t>(config.intercept_count, features.size());
  std::vector<FeatureTensor> train_features(
      features.begin(), features.begin() + static_cast<std::ptrdiff_t>(train_count));
  const std::vector<Bit> pseudo = bootstrap_labels(
      train_features,
      derive_seed(config.seed, stream_id(stream_purpose::kEveTrain, 2)));

  DemodulatorModel model =
      eve_train(config, train_features, pseudo, beta, n_vehicles);
  return eve_score(config, model, intercepts, truth_bits, threads);
}

}  // namespace chaosnoma
