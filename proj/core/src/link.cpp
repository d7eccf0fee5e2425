#include "chaosnoma/link.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chaosnoma {

double bit_energy(double reference_power, std::size_t beta,
                  std::size_t n_vehicles) {
  if (!(reference_power > 0.0))
    throw std::invalid_argument("bit_energy: reference_power must be > 0");
  if (beta == 0 || n_vehicles == 0)
    throw std::invalid_argument("bit_energy: beta and n_vehicles must be >= 1");
  return reference_power * static_cast<double>(beta) /
         static_cast<double>(n_vehicles);
}

double noise_density(double eb, double ebn0_db) {
  if (!(eb > 0.0)) throw std::invalid_argument("noise_density: eb must be > 0");
  return eb / std::pow(10.0, ebn0_db / 10.0);
}

std::vector<double> make_stream(Bit bit, double alpha, double reference_power,
                                std::size_t beta, RngStream& rng) {
  const MapId map = (bit == 0) ? MapId::kLogistic : MapId::kCubic;
  const double seed = draw_seed(map, beta, rng);
  const ChipSequence seq = standardize(modulate(bit, seed, beta));
  return scale_signal(seq, alpha, reference_power);
}

LinkBlock simulate_block(const SystemSetup& setup, double ebn0_db,
                         RngStream& rng) {
  const std::size_t n = setup.n_vehicles;
  if (n == 0) throw std::invalid_argument("simulate_block: need >= 1 vehicle");
  if (setup.profiles.size() != n)
    throw std::invalid_argument("simulate_block: need one profile per vehicle");

  LinkBlock block;
  block.alloc = power_coefficients(n, setup.reference_power);

  // One channel per vehicle, ordered weakest-first so that stream i pairs
  // with allocation coefficient i (largest share to the weakest link).
  block.channels.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    block.channels.push_back(draw_channel(setup.profiles[i], setup.beta, rng));
  std::stable_sort(block.channels.begin(), block.channels.end(),
                   [](const ChannelRealization& a, const ChannelRealization& b) {
                     return total_tap_power(a) < total_tap_power(b);
                   });

  // Build and propagate each stream through its own channel.
  block.bits.resize(n);
  block.stream_chips.resize(n);
  std::vector<std::complex<double>> sum(setup.beta, {0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) {
    block.bits[i] = static_cast<Bit>(rng.uniform_int(2));
    block.stream_chips[i] =
        make_stream(block.bits[i], block.alloc.coefficients[i],
                    setup.reference_power, setup.beta, rng);
    const std::vector<std::complex<double>> faded = apply_channel(
        to_complex(block.stream_chips[i]), block.channels[i], block.t0_s);
    for (std::size_t k = 0; k < setup.beta; ++k) sum[k] += faded[k];
  }

  const double eb = bit_energy(setup.reference_power, setup.beta, n);
  block.noise_spectral_density = noise_density(eb, ebn0_db);
  block.rx = std::move(sum);
  add_awgn(block.rx, block.noise_spectral_density, rng);

  // Receiver-side views: Doppler phase frozen mid-block, optional degradation.
  block.views.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    block.views.push_back(receiver_view(block.channels[i], setup.beta,
                                        block.t0_s, setup.csi_rho, rng));
  return block;
}

std::vector<double> reconstruct_stream(Bit bit, double alpha,
                                       double reference_power, std::size_t beta,
                                       RngStream& rng) {
  return make_stream(bit, alpha, reference_power, beta, rng);
}

}  // namespace chaosnoma
