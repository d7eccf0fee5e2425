#pragma once

#include <array>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "chaosnoma/channel.hpp"
#include "chaosnoma/chaos.hpp"
#include "chaosnoma/demodulator.hpp"
#include "chaosnoma/feature.hpp"
#include "chaosnoma/noma.hpp"
#include "chaosnoma/rng.hpp"

namespace chaosnoma {

// What happened at one cancellation stage: the residual entering the stage,
// the feature shown to the demodulator, its decision, and the seed used to
// rebuild the interference estimate (0 when the stage is last and nothing is
// reconstructed).
struct SicStageRecord {
  std::vector<std::complex<double>> residual;
  FeatureTensor feature;
  Bit decided = 0;
  double reconstruction_seed = 0.0;
};

struct SicTrace {
  std::vector<SicStageRecord> stages;
};

// Pluggable bit decision, so the cancellation loop can be driven by an oracle
// in tests as well as by the trained network.
using DemodFn =
    std::function<std::pair<Bit, std::array<double, 2>>(const FeatureTensor&)>;

// Successive cancellation over ready-made receiver views: stages run in
// decreasing power-share order (index 0 first).  At each stage the current
// residual is projected into a feature, decided, and — except at the last
// stage — an estimate of the decided stream is rebuilt from a fresh random
// seed, passed through that stage's view, and subtracted.  The subtraction is
// statistical: the fresh seed means the estimate never equals the transmitted
// sequence exactly.
std::vector<Bit> sic_receive(const std::vector<std::complex<double>>& rx,
                             const PowerAllocation& alloc,
                             const std::vector<ReceiverChannelView>& views,
                             const DemodFn& demod, RngStream& rng,
                             SicTrace* trace = nullptr);

// Receiver entry point: derives the views from the per-stream channels at the
// given CSI quality, then runs the cancellation loop with the model deciding.
std::pair<std::vector<Bit>, SicTrace> sic_receive(
    const std::vector<std::complex<double>>& rx, const PowerAllocation& alloc,
    const std::vector<ChannelRealization>& channels, double csi_rho,
    DemodulatorModel& model, RngStream& rng);

}  // namespace chaosnoma
