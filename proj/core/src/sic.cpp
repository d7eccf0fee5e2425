#include "chaosnoma/sic.hpp"

#include <stdexcept>

namespace chaosnoma {

std::vector<Bit> sic_receive(const std::vector<std::complex<double>>& rx,
                             const PowerAllocation& alloc,
                             const std::vector<ReceiverChannelView>& views,
                             const DemodFn& demod, RngStream& rng,
                             SicTrace* trace) {
  const std::size_t n = alloc.coefficients.size();
  if (n == 0) throw std::invalid_argument("sic_receive: empty allocation");
  if (views.size() != n)
    throw std::invalid_argument("sic_receive: need one view per stage");
  if (rx.empty()) throw std::invalid_argument("sic_receive: empty block");
  const std::size_t beta = rx.size();

  std::vector<Bit> bits(n);
  std::vector<std::complex<double>> residual = rx;
  for (std::size_t i = 0; i < n; ++i) {
    SicStageRecord record;
    record.residual = residual;
    record.feature = build_feature(residual, dominant_tap(views[i]));
    const auto [bit, probs] = demod(record.feature);
    (void)probs;
    bits[i] = bit;
    record.decided = bit;

    if (i + 1 < n) {
      const MapId map = (bit == 0) ? MapId::kLogistic : MapId::kCubic;
      const double seed = draw_seed(map, beta, rng);
      record.reconstruction_seed = seed;
      const ChipSequence est = standardize(modulate(bit, seed, beta));
      const std::vector<double> scaled =
          scale_signal(est, alloc.coefficients[i], alloc.reference_power);
      const std::vector<std::complex<double>> faded =
          apply_view(to_complex(scaled), views[i]);
      for (std::size_t k = 0; k < beta; ++k) residual[k] -= faded[k];
    }
    if (trace) trace->stages.push_back(std::move(record));
  }
  return bits;
}

std::pair<std::vector<Bit>, SicTrace> sic_receive(
    const std::vector<std::complex<double>>& rx, const PowerAllocation& alloc,
    const std::vector<ChannelRealization>& channels, double csi_rho,
    DemodulatorModel& model, RngStream& rng) {
  if (channels.size() != alloc.coefficients.size())
    throw std::invalid_argument("sic_receive: need one channel per stage");
  const std::size_t beta = rx.size();
  std::vector<ReceiverChannelView> views;
  views.reserve(channels.size());
  for (const ChannelRealization& ch : channels)
    views.push_back(receiver_view(ch, beta, /*t0_s=*/0.0, csi_rho, rng));

  SicTrace trace;
  const DemodFn demod = [&model](const FeatureTensor& feature) {
    return demodulate(model, feature);
  };
  std::vector<Bit> bits = sic_receive(rx, alloc, views, demod, rng, &trace);
  return {std::move(bits), std::move(trace)};
}

}  // namespace chaosnoma
