// Tests for the eavesdropper pipeline: feature summaries, unsupervised
// labeling, and the scoring loop.
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "chaosnoma/adversary.hpp"
#include "chaosnoma/link.hpp"
#include "doctest.h"

using namespace chaosnoma;

namespace {

FeatureTensor feature_from_rows(std::vector<double> time_row,
                                std::vector<double> psd_row) {
  FeatureTensor f;
  f.beta = time_row.size();
  f.time_row = std::move(time_row);
  f.psd_row = std::move(psd_row);
  return f;
}

}  // namespace

TEST_CASE("summary statistics have their textbook values") {
  // Sample {0, 0, 0, 4}: mean 1, m2 = 3, m3 = 6, skewness 6 / 3^1.5.
  const auto f =
      feature_from_rows({0.0, 0.0, 0.0, 4.0}, {1.0, 0.0, 3.0, 0.0});
  const auto s = summarize_feature(f);
  CHECK(s.time_skewness ==
        doctest::Approx(6.0 / std::pow(3.0, 1.5)).epsilon(1e-12));
  // Centroid of mass {1, 0, 3, 0} over bins {0, 1, 2, 3}: 6/4 = 1.5.
  CHECK(s.spectral_centroid == doctest::Approx(1.5).epsilon(1e-12));

  // A symmetric row has zero skewness; a constant row is defined as zero.
  const auto sym = summarize_feature(
      feature_from_rows({-1.0, 1.0, -1.0, 1.0}, {0.0, 0.0, 0.0, 0.0}));
  CHECK(sym.time_skewness == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sym.spectral_centroid == 0.0);
  const auto flat = summarize_feature(
      feature_from_rows({2.0, 2.0, 2.0}, {1.0, 1.0, 1.0}));
  CHECK(flat.time_skewness == 0.0);
  CHECK(flat.spectral_centroid == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("clearly separated summaries split perfectly") {
  // Two far-apart groups in summary space, built directly from rows whose
  // skewness is strongly positive or strongly negative.
  std::vector<FeatureTensor> features;
  std::vector<int> truth;
  RngStream rng(17);
  for (int i = 0; i < 60; ++i) {
    const bool second = (i % 2) == 1;
    std::vector<double> row(16);
    for (auto& v : row) v = 0.05 * rng.normal();
    // A single large outlier fixes the sign of the third moment.
    row[3] = second ? 8.0 : -8.0;
    std::vector<double> psd(16, 0.0);
    psd[second ? 12 : 2] = 5.0;  // distinct spectral centroid per group
    features.push_back(feature_from_rows(row, psd));
    truth.push_back(second ? 1 : 0);
  }
  const auto labels = bootstrap_labels(features, 23);
  REQUIRE(labels.size() == features.size());
  // Cluster ids are defined up to a global flip: demand a perfect partition
  // in either polarity.
  std::size_t agree = 0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    agree += (labels[i] == truth[i]) ? 1 : 0;
  CHECK((agree == labels.size() || agree == 0));
}

TEST_CASE("labeling is deterministic in the seed") {
  std::vector<FeatureTensor> features;
  RngStream rng(29);
  for (int i = 0; i < 40; ++i) {
    std::vector<double> row(8), psd(8);
    for (auto& v : row) v = rng.normal();
    for (auto& v : psd) v = std::abs(rng.normal());
    features.push_back(feature_from_rows(row, psd));
  }
  const auto a = bootstrap_labels(features, 5);
  const auto b = bootstrap_labels(features, 5);
  CHECK(a == b);
}

TEST_CASE("labeling rejects degenerate inputs") {
  const auto f = feature_from_rows({1.0, 2.0, 3.0, 10.0}, {1.0, 2.0, 1.0, 0.0});
  CHECK_THROWS_AS((void)bootstrap_labels({f}, 1), std::invalid_argument);
  // Every summary identical: nothing separates the groups.
  std::vector<FeatureTensor> same(10, f);
  CHECK_THROWS_AS((void)bootstrap_labels(same, 1), std::invalid_argument);
}

TEST_CASE("intercept features use the composite first-stage signal") {
  RngStream rng(31);
  EveIntercept intercept;
  intercept.rx.resize(16);
  for (auto& v : intercept.rx) v = rng.cnormal();
  ReceiverChannelView view;
  view.taps = {ChannelTap{{0.8, 0.6}, 0, 0.0}};
  intercept.views = {view, view};

  const auto features = intercept_features({intercept});
  REQUIRE(features.size() == 1);
  const auto direct = build_feature(intercept.rx, dominant_tap(view));
  CHECK(features[0].time_row == direct.time_row);
  CHECK(features[0].psd_row == direct.psd_row);
}

TEST_CASE("the attack runs end to end and its score is raw") {
  // Small but real: N=2 downlink; the adversary overhears independently drawn
  // channels of the same family.
  const std::size_t beta = 16;
  SystemSetup setup;
  setup.n_vehicles = 2;
  setup.beta = beta;
  setup.reference_power = 1.0;
  setup.profiles = {rayleigh_profile(1), rayleigh_profile(1)};

  RngStream sim(2025);
  std::vector<EveIntercept> intercepts;
  std::vector<std::vector<Bit>> truth;
  const std::size_t blocks = 160;
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto block = simulate_block(setup, 24.0, sim);
    EveIntercept ei;
    std::vector<std::complex<double>> sum(beta, {0.0, 0.0});
    for (std::size_t i = 0; i < 2; ++i) {
      const auto eve_ch = draw_channel(setup.profiles[i], beta, sim);
      const auto faded =
          apply_channel(to_complex(block.stream_chips[i]), eve_ch, 0.0);
      for (std::size_t k = 0; k < beta; ++k) sum[k] += faded[k];
      ei.views.push_back(receiver_view(eve_ch, beta, 0.0, 1.0, sim));
    }
    add_awgn(sum, block.noise_spectral_density, sim);
    ei.rx = std::move(sum);
    intercepts.push_back(std::move(ei));
    truth.push_back(block.bits);
  }

  EveConfig config;
  config.intercept_count = 128;
  config.eve_channel = rayleigh_profile(1);
  config.training.epochs = 2;
  config.training.batch = 32;
  config.training.samples = 128;
  config.hyperparams =
      Hyperparams{.filters = 4, .heads = 2, .head_dim = 3, .fc_hidden = 8};
  config.seed = 99;

  const auto scores = eve_train_and_score(config, intercepts, truth, 2);
  REQUIRE(scores.size() == 2);
  for (double s : scores) {
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }

  // Determinism: the same attack reproduces the same scores.
  const auto again = eve_train_and_score(config, intercepts, truth, 1);
  CHECK(scores == again);

  // Fewer observations than a training batch cannot be fit.
  EveConfig starved = config;
  starved.intercept_count = 8;
  CHECK_THROWS_AS(
      (void)eve_train_and_score(starved, intercepts, truth, 1),
      std::invalid_argument);
}
