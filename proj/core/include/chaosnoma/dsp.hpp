#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace chaosnoma {

// In-place iterative radix-2 FFT (forward, no normalization).  Length must be
// a power of two.
void fft_radix2(std::vector<std::complex<double>>& data);

// Direct O(n^2) forward DFT for arbitrary length; used as the fallback for
// non power-of-two lengths and as an oracle in tests.
std::vector<std::complex<double>> dft_direct(
    std::span<const std::complex<double>> data);

// Forward DFT of arbitrary-length data; picks radix-2 when possible.
std::vector<std::complex<double>> dft(std::span<const std::complex<double>> data);

constexpr bool is_power_of_two(std::size_t n) {
  return n != 0 && (n & (n - 1)) == 0;
}

}  // namespace chaosnoma
