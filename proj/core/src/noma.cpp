#include "chaosnoma/noma.hpp"

#include <cmath>
#include <stdexcept>

namespace chaosnoma {

PowerAllocation power_coefficients(std::size_t n_vehicles,
                                   double reference_power) {
  if (n_vehicles == 0)
    throw std::invalid_argument("power_coefficients: need at least one user");
  if (n_vehicles > 62)
    throw std::invalid_argument("power_coefficients: user count too large");
  if (!(reference_power > 0.0))
    throw std::invalid_argument("power_coefficients: power must be positive");
  PowerAllocation out;
  out.reference_power = reference_power;
  out.coefficients.resize(n_vehicles);
  // 2^N - 1 and every 2^(N-i) are exact in double for N <= 62, so the stored
  // coefficients keep the adjacent ratio of exactly 2.
  const double denom = std::ldexp(1.0, static_cast<int>(n_vehicles)) - 1.0;
  for (std::size_t i = 1; i <= n_vehicles; ++i) {
    out.coefficients[i - 1] =
        std::ldexp(1.0, static_cast<int>(n_vehicles - i)) / denom;
  }
  return out;
}

std::vector<double> scale_signal(const ChipSequence& sequence, double alpha,
                                 double p) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("scale_signal: alpha must lie in (0, 1]");
  if (!(p > 0.0))
    throw std::invalid_argument("scale_signal: power must be positive");
  const double gain = std::sqrt(alpha * p);
  std::vector<double> out(sequence.chips.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = gain * sequence.chips[k];
  return out;
}

std::vector<std::complex<double>> superpose(
    const std::vector<std::vector<std::complex<double>>>& signals) {
  if (signals.empty())
    throw std::invalid_argument("superpose: need at least one signal");
  const std::size_t len = signals.front().size();
  for (const auto& s : signals)
    if (s.size() != len)
      throw std::invalid_argument("superpose: signals must share one length");
  std::vector<std::complex<double>> out(len, {0.0, 0.0});
  for (const auto& s : signals)
    for (std::size_t k = 0; k < len; ++k) out[k] += s[k];
  return out;
}

std::vector<std::complex<double>> to_complex(const std::vector<double>& real) {
  std::vector<std::complex<double>> out(real.size());
  for (std::size_t k = 0; k < real.size(); ++k) out[k] = {real[k], 0.0};
  return out;
}

}  // namespace chaosnoma
