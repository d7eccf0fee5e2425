#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chaosnoma/chaos.hpp"

namespace chaosnoma {

// Fraction of positions where the two bit vectors disagree.
double ber(const std::vector<Bit>& tx_bits, const std::vector<Bit>& rx_bits);

// Share of transmitted energy that carries information: e_info/(e_ref+e_info).
// A reference-free scheme has e_ref = 0 and efficiency 1.
double energy_efficiency(double e_ref, double e_info);

// Bits per chip across all users: N / beta.
double spectral_efficiency(std::size_t n_vehicles, std::size_t beta);

// Mutual information of a binary symmetric channel with crossover err_rate:
// 1 + p log2 p + (1-p) log2(1-p), with the 0 * log 0 := 0 convention.
double mutual_information(double err_rate);

// Mean mutual information an eavesdropper extracts across users.
double leakage(const std::vector<double>& eve_ber_per_vehicle);

// Mean legitimate mutual information minus the leakage.
double secrecy_capacity(const std::vector<double>& legit_ber,
                        const std::vector<double>& eve_ber);

// Per-symbol operation count of the receiver chain, split by origin.  The
// attention score/value products dominate at n * beta^2.
struct ComplexityBreakdown {
  double fft_term;            // beta * log2(beta)
  double conv_term;           // n * k * beta
  double projection_term;     // n * h * d_h * beta
  double attention_term;      // n * beta^2  (dominant)
  double pooling_term;        // n * beta
  double output_term;         // n
  double total() const {
    return fft_term + conv_term + projection_term + attention_term +
           pooling_term + output_term;
  }
  double dominant() const { return attention_term; }
};

ComplexityBreakdown complexity_estimate(std::size_t beta, std::size_t n,
                                        std::size_t h, std::size_t d_h,
                                        std::size_t k_size);

// Wilson 95% score interval for a binomial proportion.
struct Interval {
  double low;
  double high;
};

Interval wilson_interval(std::uint64_t errors, std::uint64_t trials,
                         double z = 1.959963984540054);

}  // namespace chaosnoma
