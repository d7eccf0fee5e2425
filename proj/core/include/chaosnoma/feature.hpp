#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace chaosnoma {

// Two-row dual-domain description of a received block: a channel-aligned
// time-domain row and a power-spectral-density row, each of length beta.
// This is the network's input representation.
struct FeatureTensor {
  std::size_t beta = 0;
  std::vector<double> time_row;
  std::vector<double> psd_row;
};

// Unnormalized periodogram |DFT(r)[k]|^2 of the complex block.
std::vector<double> psd(std::span<const std::complex<double>> block);

// Projects the complex block onto the axis of the dominant channel tap:
// Re(r[k] * conj(tap) / |tap|).  A zero tap is only legal when the block is
// all zero (the projection is then all zero); otherwise it is an error.
std::vector<double> realify(std::span<const std::complex<double>> block,
                            std::complex<double> dominant_tap);

// Assembles the feature tensor: row 0 = realify, row 1 = psd of the complex
// block (computed before the real projection).
FeatureTensor build_feature(std::span<const std::complex<double>> block,
                            std::complex<double> dominant_tap);

// Scales each row by 1 / (rms(row) + 1e-8) in place.  Applied at the network
// boundary so stored features keep their physical scale.
void normalize_rows(FeatureTensor& feature);

double root_mean_square(std::span<const double> row);

}  // namespace chaosnoma
