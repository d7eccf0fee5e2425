#include "chaosnoma/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chaosnoma {

namespace {

void validate_tabulated(const ChannelProfile& p) {
  if (p.power_gains.empty() || p.power_gains.size() != p.delays_chips.size())
    throw std::invalid_argument("channel profile: gain/delay size mismatch");
  double sum = 0.0;
  for (double g : p.power_gains) {
    if (!(g > 0.0)) throw std::invalid_argument("channel profile: gains must be positive");
    sum += g;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("channel profile: gains must sum to 1");
  if (p.delays_chips.front() != 0)
    throw std::invalid_argument("channel profile: first delay must be 0");
  for (std::size_t i = 1; i < p.delays_chips.size(); ++i)
    if (p.delays_chips[i] <= p.delays_chips[i - 1])
      throw std::invalid_argument("channel profile: delays must increase");
}

ChannelRealization draw_tabulated(const ChannelProfile& profile,
                                  std::size_t beta, RngStream& rng) {
  validate_tabulated(profile);
  if (profile.delays_chips.back() >= beta)
    throw std::invalid_argument("channel draw: delay spread exceeds block");
  ChannelRealization out;
  out.scenario = profile.scenario;
  out.chip_period_s = 1.0 / profile.sample_rate_hz;
  out.taps.resize(profile.power_gains.size());
  for (std::size_t l = 0; l < out.taps.size(); ++l) {
    // Rayleigh tap: CN(0, g_l) so that E|gain|^2 equals the profile weight.
    const double sigma = std::sqrt(profile.power_gains[l] / 2.0);
    out.taps[l].gain = {sigma * rng.normal(), sigma * rng.normal()};
    out.taps[l].delay_chips = profile.delays_chips[l];
    out.taps[l].doppler_hz = 0.0;
  }
  return out;
}

ChannelRealization draw_parametric(const ChannelProfile& profile,
                                   std::size_t beta, RngStream& rng) {
  if (profile.n_paths_min < 1 || profile.n_paths_max < profile.n_paths_min)
    throw std::invalid_argument("channel profile: bad path count range");
  if (!(profile.pdp_decay_ns > 0.0))
    throw std::invalid_argument("channel profile: bad decay constant");
  if (!profile.k_factor_db)
    throw std::invalid_argument("channel profile: missing K-factor spec");

  ChannelRealization out;
  out.scenario = profile.scenario;
  out.chip_period_s = 1.0 / profile.sample_rate_hz;
  const double chip_ns = 1e9 * out.chip_period_s;

  const std::size_t n_paths =
      profile.n_paths_min +
      rng.uniform_int(profile.n_paths_max - profile.n_paths_min + 1);

  // One Rician K per realization, log-normal across blocks.
  const double k_db =
      profile.k_factor_db->mean_db + profile.k_factor_db->std_db * rng.normal();
  const double k_lin = std::pow(10.0, k_db / 10.0);

  // Path delays: first at 0, the rest exponential with the decay constant,
  // resampled until they land inside the block once quantized to chips.
  std::vector<double> delay_ns(n_paths, 0.0);
  std::vector<std::size_t> delay_chip(n_paths, 0);
  for (std::size_t l = 1; l < n_paths; ++l) {
    for (;;) {
      const double d = -profile.pdp_decay_ns * std::log(rng.uniform_open01());
      const auto chips = static_cast<std::size_t>(std::llround(d / chip_ns));
      if (chips < beta) {
        delay_ns[l] = d;
        delay_chip[l] = chips;
        break;
      }
    }
  }

  // Exponential power-delay weights on the continuous delays, normalized
  // together with the Rician second moment E|g|^2 = (K+2)/(K+1) so the drawn
  // realization satisfies sum_l E|gain_l|^2 = 1 conditional on K and delays.
  std::vector<double> weight(n_paths);
  double weight_sum = 0.0;
  for (std::size_t l = 0; l < n_paths; ++l) {
    weight[l] = std::exp(-delay_ns[l] / profile.pdp_decay_ns);
    weight_sum += weight[l];
  }
  const double rician_moment = (k_lin + 2.0) / (k_lin + 1.0);
  const double los = std::sqrt(k_lin / (k_lin + 1.0));
  const double diffuse = std::sqrt(1.0 / (k_lin + 1.0));

  out.taps.resize(n_paths);
  for (std::size_t l = 0; l < n_paths; ++l) {
    const std::complex<double> unscaled{los + diffuse * rng.normal(),
                                        diffuse * rng.normal()};
    // Independent carrier phase per path: distinct path lengths differ by
    // many wavelengths, and without it the chip-collision merge below would
    // add the deterministic specular components coherently and break the
    // family's unit mean power.
    const double phi = 2.0 * std::numbers::pi * rng.uniform_open01();
    const double scale = std::sqrt(weight[l] / (weight_sum * rician_moment));
    out.taps[l].gain =
        scale * unscaled * std::complex<double>{std::cos(phi), std::sin(phi)};
    out.taps[l].delay_chips = delay_chip[l];
    out.taps[l].doppler_hz = profile.doppler_rms_hz * rng.normal();
  }

  // Chip-rate bucketing: sort by delay and merge colliding paths by complex
  // addition (merged Doppler = power-weighted average).
  std::sort(out.taps.begin(), out.taps.end(),
            [](const ChannelTap& a, const ChannelTap& b) {
              return a.delay_chips < b.delay_chips;
            });
  std::vector<ChannelTap> merged;
  for (const auto& tap : out.taps) {
    if (!merged.empty() && merged.back().delay_chips == tap.delay_chips) {
      ChannelTap& m = merged.back();
      const double pw_old = std::norm(m.gain);
      const double pw_new = std::norm(tap.gain);
      if (pw_old + pw_new > 0.0)
        m.doppler_hz = (pw_old * m.doppler_hz + pw_new * tap.doppler_hz) /
                       (pw_old + pw_new);
      m.gain += tap.gain;
    } else {
      merged.push_back(tap);
    }
  }
  out.taps = std::move(merged);
  return out;
}

}  // namespace

ChannelProfile awgn_profile() {
  ChannelProfile p;
  p.scenario = Scenario::kAwgnOnly;
  p.power_gains = {1.0};
  p.delays_chips = {0};
  return p;
}

ChannelProfile rayleigh_profile(int profile_index) {
  ChannelProfile p;
  p.scenario = Scenario::kRayleighProfile;
  switch (profile_index) {
    case 1:
      p.power_gains = {1.0 / 2.0, 1.0 / 2.0};
      p.delays_chips = {0, 2};
      break;
    case 2:
      p.power_gains = {4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0};
      p.delays_chips = {0, 2, 4};
      break;
    case 3:
      p.power_gains = {4.0 / 9.0, 2.0 / 9.0, 2.0 / 9.0, 1.0 / 9.0};
      p.delays_chips = {0, 2, 3, 5};
      break;
    case 4:
      // 7:2:1:1 power ratios, normalized so the profile closes to unit power.
      p.power_gains = {7.0 / 11.0, 2.0 / 11.0, 1.0 / 11.0, 1.0 / 11.0};
      p.delays_chips = {0, 2, 4, 6};
      break;
    default:
      throw std::invalid_argument("rayleigh_profile: index must be 1..4");
  }
  return p;
}

ChannelProfile v2i_profile(Scenario which) {
  ChannelProfile p;
  p.scenario = which;
  if (which == Scenario::kV2iPrimary) {
    p.k_factor_db = KFactorSpec{9.56, 4.58};
    p.n_paths_min = 5;
    p.n_paths_max = 8;
    p.pdp_decay_ns = 60.0;
    p.rms_delay_ns = 46.8;
    p.doppler_rms_hz = 33.3;
    p.angular_spread_deg = 25.1;
  } else if (which == Scenario::kV2iAuxiliary) {
    p.k_factor_db = KFactorSpec{4.22, 4.96};
    p.n_paths_min = 10;
    p.n_paths_max = 16;
    p.pdp_decay_ns = 190.0;
    p.rms_delay_ns = 145.0;
    p.doppler_rms_hz = 35.4;
    p.angular_spread_deg = 41.4;
  } else {
    throw std::invalid_argument("v2i_profile: not a measurement-derived scenario");
  }
  return p;
}

ChannelRealization draw_channel(const ChannelProfile& profile, std::size_t beta,
                                RngStream& rng) {
  if (beta == 0) throw std::invalid_argument("draw_channel: beta must be positive");
  switch (profile.scenario) {
    case Scenario::kAwgnOnly: {
      ChannelRealization out;
      out.scenario = Scenario::kAwgnOnly;
      out.chip_period_s = 1.0 / profile.sample_rate_hz;
      out.taps = {ChannelTap{{1.0, 0.0}, 0, 0.0}};
      return out;
    }
    case Scenario::kRayleighProfile:
      return draw_tabulated(profile, beta, rng);
    case Scenario::kV2iPrimary:
    case Scenario::kV2iAuxiliary:
      return draw_parametric(profile, beta, rng);
  }
  throw std::invalid_argument("draw_channel: unknown scenario");
}

std::vector<std::complex<double>> apply_channel(
    std::span<const std::complex<double>> block,
    const ChannelRealization& channel, double t0_s) {
  const std::size_t n = block.size();
  std::vector<std::complex<double>> out(n, {0.0, 0.0});
  for (const auto& tap : channel.taps) {
    if (tap.delay_chips >= n)
      throw std::invalid_argument("apply_channel: tap delay exceeds block");
    if (tap.doppler_hz == 0.0) {
      for (std::size_t k = tap.delay_chips; k < n; ++k)
        out[k] += tap.gain * block[k - tap.delay_chips];
    } else {
      const double step = -2.0 * std::numbers::pi * tap.doppler_hz;
      for (std::size_t k = tap.delay_chips; k < n; ++k) {
        const double phase =
            step * (t0_s + static_cast<double>(k) * channel.chip_period_s);
        const std::complex<double> rot{std::cos(phase), std::sin(phase)};
        out[k] += tap.gain * rot * block[k - tap.delay_chips];
      }
    }
  }
  return out;
}

void add_awgn(std::vector<std::complex<double>>& block, double n0,
              RngStream& rng) {
  if (!(n0 >= 0.0)) throw std::invalid_argument("add_awgn: n0 must be >= 0");
  if (n0 == 0.0) return;
  const double sigma = std::sqrt(n0 / 2.0);
  for (auto& v : block)
    v += std::complex<double>{sigma * rng.normal(), sigma * rng.normal()};
}

std::complex<double> degrade_csi(std::complex<double> h, double rho,
                                 RngStream& rng) {
  if (!(rho >= 0.0) || rho > 1.0)
    throw std::invalid_argument("degrade_csi: rho must lie in [0, 1]");
  if (rho == 1.0) return h;  // exact knowledge: no random draw
  return rho * h + std::sqrt(1.0 - rho * rho) * rng.cnormal();
}

double total_tap_power(const ChannelRealization& channel) {
  double acc = 0.0;
  for (const auto& tap : channel.taps) acc += std::norm(tap.gain);
  return acc;
}

ReceiverChannelView receiver_view(const ChannelRealization& channel,
                                  std::size_t beta, double t0_s, double rho,
                                  RngStream& rng) {
  if (beta == 0) throw std::invalid_argument("receiver_view: beta must be positive");
  ReceiverChannelView view;
  view.taps.reserve(channel.taps.size());
  const double t_mid =
      t0_s + 0.5 * static_cast<double>(beta) * channel.chip_period_s;
  for (const auto& tap : channel.taps) {
    ChannelTap frozen = tap;
    if (tap.doppler_hz != 0.0) {
      const double phase = -2.0 * std::numbers::pi * tap.doppler_hz * t_mid;
      frozen.gain *= std::complex<double>{std::cos(phase), std::sin(phase)};
    }
    frozen.gain = degrade_csi(frozen.gain, rho, rng);
    view.taps.push_back(frozen);
  }
  return view;
}

std::vector<std::complex<double>> apply_view(
    std::span<const std::complex<double>> block,
    const ReceiverChannelView& view) {
  const std::size_t n = block.size();
  std::vector<std::complex<double>> out(n, {0.0, 0.0});
  for (const auto& tap : view.taps) {
    if (tap.delay_chips >= n)
      throw std::invalid_argument("apply_view: tap delay exceeds block");
    for (std::size_t k = tap.delay_chips; k < n; ++k)
      out[k] += tap.gain * block[k - tap.delay_chips];
  }
  return out;
}

std::complex<double> dominant_tap(const ReceiverChannelView& view) {
  if (view.taps.empty())
    throw std::invalid_argument("dominant_tap: empty view");
  std::size_t best = 0;
  double best_pw = std::norm(view.taps[0].gain);
  for (std::size_t l = 1; l < view.taps.size(); ++l) {
    const double pw = std::norm(view.taps[l].gain);
    if (pw > best_pw) {  // strict: ties keep the earliest delay
      best_pw = pw;
      best = l;
    }
  }
  return view.taps[best].gain;
}

}  // namespace chaosnoma
