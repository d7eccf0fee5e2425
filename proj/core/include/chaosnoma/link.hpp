#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "chaosnoma/channel.hpp"
#include "chaosnoma/chaos.hpp"
#include "chaosnoma/noma.hpp"
#include "chaosnoma/rng.hpp"

namespace chaosnoma {

// Static description of the downlink under simulation.
struct SystemSetup {
  std::size_t n_vehicles = 2;
  std::size_t beta = 32;
  double reference_power = 1.0;
  std::vector<ChannelProfile> profiles;  // one per vehicle
  double csi_rho = 1.0;                  // receiver channel-knowledge quality
};

// One simulated block: per-stream bits, channels (sorted so stream 0 rides
// the weakest channel and therefore carries the largest power share), the
// receiver-side channel views, and the composite received waveform.
struct LinkBlock {
  std::vector<Bit> bits;                     // one bit per stream
  std::vector<std::vector<double>> stream_chips;  // scaled transmit chips
  std::vector<ChannelRealization> channels;  // sorted ascending by tap power
  std::vector<ReceiverChannelView> views;    // receiver's per-stream knowledge
  std::vector<std::complex<double>> rx;      // length beta
  PowerAllocation alloc;
  double noise_spectral_density = 0.0;  // N0 used for this block
  double t0_s = 0.0;
};

// Per-bit reference energy: total power times chips per bit, split across the
// superposed streams.
double bit_energy(double reference_power, std::size_t beta,
                  std::size_t n_vehicles);

// N0 for a target Eb/N0 operating point (dB).
double noise_density(double eb, double ebn0_db);

// Standardized chip waveform for one stream: map selected by the bit, fresh
// random seed, chips standardized to zero mean and unit power, then scaled by
// sqrt(alpha * reference_power).
std::vector<double> make_stream(Bit bit, double alpha, double reference_power,
                                std::size_t beta, RngStream& rng);

// Draw channels, sort them weakest-first, build each stream, pass every
// stream through its own channel, superpose at the receiver, and add noise
// for the requested Eb/N0.  All randomness comes from `rng` in a fixed order:
// channels, then per-stream (bit, seed), then noise, then view degradation.
LinkBlock simulate_block(const SystemSetup& setup, double ebn0_db,
                         RngStream& rng);

// Transmit-side estimate of one stream for interference cancellation: same
// map family as the decided bit but an independent random seed, standardized
// and scaled exactly like the transmitter.
std::vector<double> reconstruct_stream(Bit bit, double alpha,
                                       double reference_power, std::size_t beta,
                                       RngStream& rng);

}  // namespace chaosnoma
