#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "chaosnoma/rng.hpp"

namespace chaosnoma {

enum class Scenario : std::uint8_t {
  kAwgnOnly = 0,       // single unit tap, no fading
  kRayleighProfile,    // fixed tabulated power-delay profile, Rayleigh taps
  kV2iPrimary,         // measurement-derived highway link, Rician taps
  kV2iAuxiliary,       // measurement-derived secondary link, Rician taps
};

// One resolvable propagation path at chip resolution.
struct ChannelTap {
  std::complex<double> gain{0.0, 0.0};
  std::size_t delay_chips = 0;
  double doppler_hz = 0.0;
};

// A block-fading draw: tap list sorted by strictly increasing delay, first
// delay zero.  Gains are fixed for the block; Doppler rotates their phase
// continuously within it.
struct ChannelRealization {
  std::vector<ChannelTap> taps;
  Scenario scenario = Scenario::kAwgnOnly;
  double chip_period_s = 1e-8;  // 100 MHz chip rate
};

struct KFactorSpec {
  double mean_db = 0.0;
  double std_db = 0.0;
};

// Declarative description of how to draw a channel.  Tabulated profiles fill
// power_gains/delays_chips; parametric (measurement-derived) profiles fill
// the path-count / decay / K-factor / Doppler fields.
struct ChannelProfile {
  Scenario scenario = Scenario::kAwgnOnly;

  // Tabulated form.
  std::vector<double> power_gains;         // sums to 1
  std::vector<std::size_t> delays_chips;   // strictly increasing, first 0

  // Parametric form.
  std::size_t n_paths_min = 0;
  std::size_t n_paths_max = 0;
  double pdp_decay_ns = 0.0;      // exponential power-delay constant
  double rms_delay_ns = 0.0;      // recorded for reference
  std::optional<KFactorSpec> k_factor_db;
  double doppler_rms_hz = 0.0;
  double angular_spread_deg = 0.0;  // recorded; single-antenna model ignores it
  double carrier_hz = 3.35e9;
  double sample_rate_hz = 100e6;
};

ChannelProfile awgn_profile();

// Tabulated urban profiles 1..4:
//   1: gains {1/2, 1/2},           delays {0, 2}
//   2: gains {4/7, 2/7, 1/7},      delays {0, 2, 4}
//   3: gains {4/9, 2/9, 2/9, 1/9}, delays {0, 2, 3, 5}
//   4: gains {7/12, 2/12, 1/12, 1/12}, delays {0, 2, 4, 6}
ChannelProfile rayleigh_profile(int profile_index);

// Measurement-derived highway profiles.
//   primary:   K ~ N(9.56 dB, 4.58 dB), 5..8 paths,  decay 60.0 ns,
//              rms delay 46.8 ns, Doppler rms 33.3 Hz
//   auxiliary: K ~ N(4.22 dB, 4.96 dB), 10..16 paths, decay 190.0 ns,
//              rms delay 145.0 ns, Doppler rms 35.4 Hz
ChannelProfile v2i_profile(Scenario which);

// Draws one block realization.  beta bounds the usable delay spread: every
// tap delay is strictly below beta chips.
ChannelRealization draw_channel(const ChannelProfile& profile, std::size_t beta,
                                RngStream& rng);

// Applies the channel to a block transmitted starting at time t0: tapped
// delay line truncated at the block boundary, each tap rotating at its
// Doppler frequency, out[k] = sum_l gain_l e^{-j2 pi f_l (t0 + k Tc)} x[k-d_l].
std::vector<std::complex<double>> apply_channel(
    std::span<const std::complex<double>> block,
    const ChannelRealization& channel, double t0_s);

// Adds circularly symmetric complex Gaussian noise of variance n0 per sample.
void add_awgn(std::vector<std::complex<double>>& block, double n0,
              RngStream& rng);

// Noise estimate quality model: rho = 1 returns h untouched (no random draw),
// otherwise rho*h + sqrt(1-rho^2)*xi with xi ~ CN(0,1).
std::complex<double> degrade_csi(std::complex<double> h, double rho,
                                 RngStream& rng);

// Sum of |gain|^2 over taps; the instantaneous channel strength used to rank
// users before power allocation.
double total_tap_power(const ChannelRealization& channel);

// What the receiver knows about the channel for one block: the tap gains with
// Doppler phase frozen at the block midpoint, optionally degraded per tap.
struct ReceiverChannelView {
  std::vector<ChannelTap> taps;  // doppler_hz kept for reference, phase frozen
};

// Builds the receiver's view for a block of beta chips starting at t0.
// rho = 1 yields the exact mid-block taps.
ReceiverChannelView receiver_view(const ChannelRealization& channel,
                                  std::size_t beta, double t0_s, double rho,
                                  RngStream& rng);

// Static tapped-delay-line convolution with the frozen view (no Doppler
// evolution); used for interference reconstruction inside the receiver.
std::vector<std::complex<double>> apply_view(
    std::span<const std::complex<double>> block,
    const ReceiverChannelView& view);

// Strongest tap of the view (ties: earliest delay wins).
std::complex<double> dominant_tap(const ReceiverChannelView& view);

}  // namespace chaosnoma
