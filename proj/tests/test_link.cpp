// Tests for the downlink block simulator: energy bookkeeping, stream
// construction, channel ordering, and reproducibility.
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "chaosnoma/link.hpp"
#include "doctest.h"

using namespace chaosnoma;

namespace {

SystemSetup awgn_setup(std::size_t n, std::size_t beta) {
  SystemSetup setup;
  setup.n_vehicles = n;
  setup.beta = beta;
  setup.reference_power = 1.0;
  setup.profiles.assign(n, awgn_profile());
  setup.csi_rho = 1.0;
  return setup;
}

}  // namespace

TEST_CASE("per-bit reference energy") {
  CHECK(bit_energy(1.0, 32, 2) == doctest::Approx(16.0));
  CHECK(bit_energy(2.0, 16, 4) == doctest::Approx(8.0));
  CHECK_THROWS_AS((void)bit_energy(0.0, 32, 2), std::invalid_argument);
  CHECK_THROWS_AS((void)bit_energy(1.0, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS((void)bit_energy(1.0, 32, 0), std::invalid_argument);
}

TEST_CASE("noise density for a target operating point") {
  CHECK(noise_density(16.0, 10.0) == doctest::Approx(1.6).epsilon(1e-14));
  CHECK(noise_density(3.5, 0.0) == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(noise_density(1.0, -10.0) == doctest::Approx(10.0).epsilon(1e-13));
  CHECK_THROWS_AS((void)noise_density(0.0, 10.0), std::invalid_argument);
}

TEST_CASE("streams are standardized then scaled") {
  RngStream rng(100);
  const double alpha = 2.0 / 3.0;
  const double power = 4.0;
  const std::size_t beta = 64;
  for (Bit bit : {Bit{0}, Bit{1}}) {
    const auto chips = make_stream(bit, alpha, power, beta, rng);
    REQUIRE(chips.size() == beta);
    double mean = 0.0, energy = 0.0;
    for (double c : chips) {
      mean += c;
      energy += c * c;
    }
    mean /= static_cast<double>(beta);
    energy /= static_cast<double>(beta);
    CHECK(std::abs(mean) < 1e-10);
    CHECK(energy == doctest::Approx(alpha * power).epsilon(1e-10));
  }
}

TEST_CASE("block simulation wires the pieces together") {
  auto setup = awgn_setup(2, 32);
  RngStream rng(555);
  const auto block = simulate_block(setup, 20.0, rng);

  CHECK(block.bits.size() == 2);
  CHECK(block.stream_chips.size() == 2);
  CHECK(block.channels.size() == 2);
  CHECK(block.views.size() == 2);
  CHECK(block.rx.size() == 32);
  CHECK(block.alloc.coefficients.size() == 2);
  CHECK(block.alloc.coefficients[0] == doctest::Approx(2.0 / 3.0));
  const double eb = bit_energy(1.0, 32, 2);
  CHECK(block.noise_spectral_density ==
        doctest::Approx(noise_density(eb, 20.0)).epsilon(1e-14));

  // Perfect-knowledge views of a static unit channel copy the taps.
  for (const auto& view : block.views) {
    REQUIRE(view.taps.size() == 1);
    CHECK(view.taps[0].gain == std::complex<double>{1.0, 0.0});
  }
  CHECK_THROWS_AS((void)simulate_block(SystemSetup{.n_vehicles = 2,
                                                   .beta = 32,
                                                   .profiles = {awgn_profile()}},
                                       20.0, rng),
                  std::invalid_argument);
}

TEST_CASE("channels come out sorted weakest first") {
  SystemSetup setup;
  setup.n_vehicles = 3;
  setup.beta = 32;
  setup.reference_power = 1.0;
  setup.profiles = {rayleigh_profile(1), rayleigh_profile(2),
                    rayleigh_profile(3)};
  RngStream rng(808);
  for (int trial = 0; trial < 50; ++trial) {
    const auto block = simulate_block(setup, 24.0, rng);
    for (std::size_t i = 1; i < block.channels.size(); ++i)
      CHECK(total_tap_power(block.channels[i - 1]) <=
            total_tap_power(block.channels[i]));
  }
}

TEST_CASE("received block is the superposition of the faded streams") {
  auto setup = awgn_setup(3, 16);
  RngStream rng(9001);
  // At an extreme operating point the additive noise is negligible, so the
  // stored per-stream chips must reproduce the received block.
  const auto block = simulate_block(setup, 300.0, rng);
  std::vector<std::complex<double>> expect(16, {0.0, 0.0});
  for (std::size_t i = 0; i < 3; ++i) {
    const auto faded = apply_channel(to_complex(block.stream_chips[i]),
                                     block.channels[i], block.t0_s);
    for (std::size_t k = 0; k < 16; ++k) expect[k] += faded[k];
  }
  for (std::size_t k = 0; k < 16; ++k)
    CHECK(std::abs(block.rx[k] - expect[k]) < 1e-9);
}

TEST_CASE("block simulation is a pure function of the stream") {
  auto setup = awgn_setup(2, 32);
  RngStream a(2468);
  RngStream b(2468);
  const auto ba = simulate_block(setup, 12.0, a);
  const auto bb = simulate_block(setup, 12.0, b);
  CHECK(ba.bits == bb.bits);
  REQUIRE(ba.rx.size() == bb.rx.size());
  for (std::size_t k = 0; k < ba.rx.size(); ++k) CHECK(ba.rx[k] == bb.rx[k]);
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(ba.stream_chips[i] == bb.stream_chips[i]);

  // A different stream draws a different block.
  RngStream c(13579);
  const auto bc = simulate_block(setup, 12.0, c);
  bool differs = false;
  for (std::size_t k = 0; k < 32 && !differs; ++k)
    differs = bc.rx[k] != ba.rx[k];
  CHECK(differs);
}

TEST_CASE("transmit power is shared across the superposed streams") {
  auto setup = awgn_setup(2, 32);
  RngStream rng(31415);
  double chip_power = 0.0;
  const int blocks = 4000;
  for (int t = 0; t < blocks; ++t) {
    const auto block = simulate_block(setup, 300.0, rng);  // noise negligible
    for (const auto& v : block.rx) chip_power += std::norm(v);
  }
  chip_power /= static_cast<double>(blocks) * 32.0;
  // Independent zero-mean streams: E|sum|^2 = sum alpha_i P = P.
  CHECK(chip_power == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("interference reconstruction mirrors the transmitter recipe") {
  RngStream a(777);
  RngStream b(777);
  const auto tx = make_stream(1, 0.5, 2.0, 16, a);
  const auto rec = reconstruct_stream(1, 0.5, 2.0, 16, b);
  CHECK(tx == rec);  // same stream state in, same chips out
}
