#include "chaosnoma/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chaosnoma {

double ber(const std::vector<Bit>& tx_bits, const std::vector<Bit>& rx_bits) {
  if (tx_bits.empty() || tx_bits.size() != rx_bits.size())
    throw std::invalid_argument("ber: need equal nonempty bit vectors");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < tx_bits.size(); ++i)
    errors += tx_bits[i] != rx_bits[i] ? 1 : 0;
  return static_cast<double>(errors) / static_cast<double>(tx_bits.size());
}

double energy_efficiency(double e_ref, double e_info) {
  if (!(e_ref >= 0.0) || !(e_info >= 0.0))
    throw std::invalid_argument("energy_efficiency: energies must be >= 0");
  const double total = e_ref + e_info;
  if (!(total > 0.0))
    throw std::invalid_argument("energy_efficiency: total energy must be > 0");
  return e_info / total;
}

double spectral_efficiency(std::size_t n_vehicles, std::size_t beta) {
  if (n_vehicles < 1 || beta < 1)
    throw std::invalid_argument("spectral_efficiency: need n >= 1 and beta >= 1");
  return static_cast<double>(n_vehicles) / static_cast<double>(beta);
}

double mutual_information(double err_rate) {
  if (!(err_rate >= 0.0) || !(err_rate <= 1.0))
    throw std::invalid_argument("mutual_information: rate must lie in [0, 1]");
  const auto plogp = [](double p) {
    return p > 0.0 ? p * std::log2(p) : 0.0;  // 0 * log 0 := 0
  };
  return 1.0 + plogp(err_rate) + plogp(1.0 - err_rate);
}

double leakage(const std::vector<double>& eve_ber_per_vehicle) {
  if (eve_ber_per_vehicle.empty())
    throw std::invalid_argument("leakage: need at least one vehicle");
  double acc = 0.0;
  for (double r : eve_ber_per_vehicle) acc += mutual_information(r);
  return acc / static_cast<double>(eve_ber_per_vehicle.size());
}

double secrecy_capacity(const std::vector<double>& legit_ber,
                        const std::vector<double>& eve_ber) {
  if (legit_ber.empty() || legit_ber.size() != eve_ber.size())
    throw std::invalid_argument("secrecy_capacity: need equal nonempty lists");
  double legit_mi = 0.0;
  for (double r : legit_ber) legit_mi += mutual_information(r);
  legit_mi /= static_cast<double>(legit_ber.size());
  return legit_mi - leakage(eve_ber);
}

ComplexityBreakdown complexity_estimate(std::size_t beta, std::size_t n,
                                        std::size_t h, std::size_t d_h,
                                        std::size_t k_size) {
  if (beta < 1 || n < 1 || h < 1 || d_h < 1 || k_size < 1)
    throw std::invalid_argument("complexity_estimate: arguments must be positive");
  const double b = static_cast<double>(beta);
  const double nd = static_cast<double>(n);
  ComplexityBreakdown out;
  out.fft_term = b * std::log2(b);
  out.conv_term = nd * static_cast<double>(k_size) * b;
  out.projection_term = nd * static_cast<double>(h) * static_cast<double>(d_h) * b;
  out.attention_term = nd * b * b;
  out.pooling_term = nd * b;
  out.output_term = nd;
  return out;
}

Interval wilson_interval(std::uint64_t errors, std::uint64_t trials, double z) {
  if (trials == 0)
    throw std::invalid_argument("wilson_interval: need at least one trial");
  if (errors > trials)
    throw std::invalid_argument("wilson_interval: errors exceed trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace chaosnoma
