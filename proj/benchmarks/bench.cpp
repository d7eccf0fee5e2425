// Microbenchmarks for the hot paths of the simulator: spreading-sequence
// generation, spectral features, channel draws, network inference, training
// steps, and the full per-block receive chain.
#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "chaosnoma/channel.hpp"
#include "chaosnoma/chaos.hpp"
#include "chaosnoma/config.hpp"
#include "chaosnoma/demod_net.hpp"
#include "chaosnoma/demodulator.hpp"
#include "chaosnoma/dsp.hpp"
#include "chaosnoma/feature.hpp"
#include "chaosnoma/link.hpp"
#include "chaosnoma/nn.hpp"
#include "chaosnoma/noma.hpp"
#include "chaosnoma/rng.hpp"
#include "chaosnoma/sic.hpp"

namespace {

using namespace chaosnoma;

void BM_GenerateLogistic(benchmark::State& state) {
  const auto beta = static_cast<std::size_t>(state.range(0));
  RngStream rng(1);
  for (auto _ : state) {
    const double seed = draw_seed(MapId::kLogistic, beta, rng);
    auto seq = standardize(generate_logistic(seed, beta));
    benchmark::DoNotOptimize(seq.chips.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateLogistic)->Arg(16)->Arg(64)->Arg(128);

void BM_GenerateCubic(benchmark::State& state) {
  const auto beta = static_cast<std::size_t>(state.range(0));
  RngStream rng(2);
  for (auto _ : state) {
    const double seed = draw_seed(MapId::kCubic, beta, rng);
    auto seq = standardize(generate_cubic(seed, beta));
    benchmark::DoNotOptimize(seq.chips.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateCubic)->Arg(16)->Arg(64)->Arg(128);

void BM_Psd(benchmark::State& state) {
  const auto beta = static_cast<std::size_t>(state.range(0));
  RngStream rng(3);
  std::vector<std::complex<double>> block(beta);
  for (auto& v : block) v = rng.cnormal();
  for (auto _ : state) {
    auto spectrum = psd(block);
    benchmark::DoNotOptimize(spectrum.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Psd)->Arg(16)->Arg(64)->Arg(128);

void BM_BuildFeature(benchmark::State& state) {
  const auto beta = static_cast<std::size_t>(state.range(0));
  RngStream rng(4);
  std::vector<std::complex<double>> block(beta);
  for (auto& v : block) v = rng.cnormal();
  const std::complex<double> tap{0.6, -0.8};
  for (auto _ : state) {
    auto feature = build_feature(block, tap);
    benchmark::DoNotOptimize(feature.time_row.data());
  }
}
BENCHMARK(BM_BuildFeature)->Arg(32)->Arg(64);

void BM_DrawTabulated(benchmark::State& state) {
  const auto profile = rayleigh_profile(static_cast<int>(state.range(0)));
  RngStream rng(5);
  for (auto _ : state) {
    auto ch = draw_channel(profile, 64, rng);
    benchmark::DoNotOptimize(ch.taps.data());
  }
}
BENCHMARK(BM_DrawTabulated)->Arg(1)->Arg(4);

void BM_DrawHighway(benchmark::State& state) {
  const auto profile = v2i_profile(state.range(0) == 0
                                       ? Scenario::kV2iPrimary
                                       : Scenario::kV2iAuxiliary);
  RngStream rng(6);
  for (auto _ : state) {
    auto ch = draw_channel(profile, 128, rng);
    benchmark::DoNotOptimize(ch.taps.data());
  }
}
BENCHMARK(BM_DrawHighway)->Arg(0)->Arg(1);

void BM_ApplyChannel(benchmark::State& state) {
  const auto beta = static_cast<std::size_t>(state.range(0));
  RngStream rng(7);
  auto ch = draw_channel(v2i_profile(Scenario::kV2iPrimary), beta, rng);
  std::vector<std::complex<double>> block(beta);
  for (auto& v : block) v = rng.cnormal();
  for (auto _ : state) {
    auto out = apply_channel(block, ch, 1e-5);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ApplyChannel)->Arg(32)->Arg(128);

void BM_Demodulate(benchmark::State& state) {
  const auto beta = static_cast<std::size_t>(state.range(0));
  auto model = build_model(beta, Hyperparams{}, 42);
  RngStream rng(8);
  FeatureTensor feature;
  feature.beta = beta;
  feature.time_row.resize(beta);
  feature.psd_row.resize(beta);
  for (auto& v : feature.time_row) v = rng.normal();
  for (auto& v : feature.psd_row) v = std::abs(rng.normal());
  for (auto _ : state) {
    auto decision = demodulate(model, feature);
    benchmark::DoNotOptimize(decision.second[0]);
  }
}
BENCHMARK(BM_Demodulate)->Arg(16)->Arg(32)->Arg(64);

void BM_TrainStep(benchmark::State& state) {
  const std::size_t beta = 16;
  const std::size_t batch = 64;
  DemodNet<float> net(beta, Hyperparams{}, 9);
  Adam<float> opt(net.parameters(), 1e-3f);
  SoftmaxCrossEntropy<float> loss;
  RngStream rng(10);
  Tensor<float> x({batch, 2, beta});
  for (auto& v : x.data) v = static_cast<float>(rng.normal());
  std::vector<Bit> labels(batch);
  for (auto& b : labels) b = static_cast<Bit>(rng.uniform_int(2));
  for (auto _ : state) {
    opt.zero_grad();
    const double value = loss.forward(net.forward(x, true), labels);
    benchmark::DoNotOptimize(value);
    (void)net.backward(loss.backward());
    opt.step();
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_TrainStep);

void BM_SimulateBlock(benchmark::State& state) {
  SystemSetup setup;
  setup.n_vehicles = 2;
  setup.beta = 32;
  setup.profiles = {rayleigh_profile(1), rayleigh_profile(2)};
  RngStream rng(11);
  for (auto _ : state) {
    auto block = simulate_block(setup, 20.0, rng);
    benchmark::DoNotOptimize(block.rx.data());
  }
}
BENCHMARK(BM_SimulateBlock);

void BM_SicReceive(benchmark::State& state) {
  SystemSetup setup;
  setup.n_vehicles = 2;
  setup.beta = 32;
  setup.profiles = {rayleigh_profile(1), rayleigh_profile(2)};
  auto model = build_model(setup.beta, Hyperparams{}, 12);
  const auto alloc = power_coefficients(setup.n_vehicles, 1.0);
  RngStream rng(13);
  auto block = simulate_block(setup, 20.0, rng);
  for (auto _ : state) {
    auto decoded = sic_receive(block.rx, alloc, block.channels, 1.0, model, rng);
    benchmark::DoNotOptimize(decoded.first.data());
  }
}
BENCHMARK(BM_SicReceive);

}  // namespace

BENCHMARK_MAIN();
