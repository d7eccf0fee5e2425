#include "chaosnoma/feature.hpp"

#include <cmath>
#include <stdexcept>

#include "chaosnoma/dsp.hpp"

namespace chaosnoma {

std::vector<double> psd(std::span<const std::complex<double>> block) {
  const auto spectrum = dft(block);
  std::vector<double> out(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k)
    out[k] = std::norm(spectrum[k]);
  return out;
}

std::vector<double> realify(std::span<const std::complex<double>> block,
                            std::complex<double> dominant_tap) {
  const double mag = std::abs(dominant_tap);
  std::vector<double> out(block.size());
  if (mag == 0.0) {
    for (const auto& v : block)
      if (v != std::complex<double>{0.0, 0.0})
        throw std::invalid_argument(
            "realify: zero channel tap with nonzero signal");
    return out;  // all zero
  }
  const std::complex<double> axis = std::conj(dominant_tap) / mag;
  for (std::size_t k = 0; k < block.size(); ++k)
    out[k] = (block[k] * axis).real();
  return out;
}

FeatureTensor build_feature(std::span<const std::complex<double>> block,
                            std::complex<double> dominant_tap) {
  if (block.empty()) throw std::invalid_argument("build_feature: empty block");
  FeatureTensor out;
  out.beta = block.size();
  out.psd_row = psd(block);
  out.time_row = realify(block, dominant_tap);
  return out;
}

double root_mean_square(std::span<const double> row) {
  if (row.empty()) return 0.0;
  double acc = 0.0;
  for (double v : row) acc += v * v;
  return std::sqrt(acc / static_cast<double>(row.size()));
}

void normalize_rows(FeatureTensor& feature) {
  constexpr double kRmsFloor = 1e-8;
  const double time_scale = 1.0 / (root_mean_square(feature.time_row) + kRmsFloor);
  for (double& v : feature.time_row) v *= time_scale;
  const double psd_scale = 1.0 / (root_mean_square(feature.psd_row) + kRmsFloor);
  for (double& v : feature.psd_row) v *= psd_scale;
}

}  // namespace chaosnoma
