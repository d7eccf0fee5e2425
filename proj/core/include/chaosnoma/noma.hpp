#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "chaosnoma/chaos.hpp"

namespace chaosnoma {

// Power split across the superposed users.  coefficients[i] is the fraction
// of reference_power assigned to user i+1; strictly decreasing, sums to 1,
// adjacent ratio exactly 2.
struct PowerAllocation {
  std::vector<double> coefficients;
  double reference_power = 1.0;
};

// Geometric power ladder: user i of N gets 2^(N-i) / (2^N - 1).  User 1
// (the weakest channel) receives the largest share.
PowerAllocation power_coefficients(std::size_t n_vehicles,
                                   double reference_power = 1.0);

// Scales a standardized chip sequence by sqrt(alpha * p).
std::vector<double> scale_signal(const ChipSequence& sequence, double alpha,
                                 double p);

// Element-wise sum of per-user signals; all signals must share one length.
std::vector<std::complex<double>> superpose(
    const std::vector<std::vector<std::complex<double>>>& signals);

// Real-to-complex convenience for feeding baseband processing.
std::vector<std::complex<double>> to_complex(const std::vector<double>& real);

}  // namespace chaosnoma
