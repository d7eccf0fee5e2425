#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "chaosnoma/chaos.hpp"

using namespace chaosnoma;

TEST_CASE("logistic orbit from 0.2") {
  const ChipSequence seq = generate_logistic(0.2, 3);
  REQUIRE(seq.chips.size() == 3);
  CHECK(seq.chips[0] == doctest::Approx(0.5920000000000001).epsilon(1e-15));
  CHECK(seq.chips[1] == doctest::Approx(0.8936832).epsilon(1e-15));
  CHECK(seq.chips[2] == doctest::Approx(0.35155009073971194).epsilon(1e-15));
  CHECK(seq.map_id == MapId::kLogistic);
  CHECK(seq.seed == 0.2);
}

TEST_CASE("logistic single chip from the half point") {
  const ChipSequence seq = generate_logistic(0.5, 1);
  REQUIRE(seq.chips.size() == 1);
  CHECK(seq.chips[0] == doctest::Approx(0.925).epsilon(1e-15));
}

TEST_CASE("cubic orbit from 0.3") {
  const ChipSequence seq = generate_cubic(0.3, 3);
  REQUIRE(seq.chips.size() == 3);
  CHECK(seq.chips[0] == doctest::Approx(-0.7919999999999999).epsilon(1e-15));
  CHECK(seq.chips[1] == doctest::Approx(0.38882764800000036).epsilon(1e-15));
  CHECK(seq.chips[2] == doctest::Approx(-0.9313402950804542).epsilon(1e-15));
  CHECK(seq.map_id == MapId::kCubic);
}

TEST_CASE("cubic rejects the seed that collapses to a fixed point") {
  // 0.5 -> 4/8 - 3/2 = -1, which is a fixed point of the cubic map.
  CHECK_THROWS_AS(generate_cubic(0.5, 4), std::invalid_argument);
  CHECK(degenerate_orbit(MapId::kCubic, 0.5, 4));
}

TEST_CASE("seed domain is the open unit interval") {
  CHECK_THROWS_AS(generate_logistic(0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(generate_logistic(1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(generate_logistic(-0.2, 4), std::invalid_argument);
  CHECK_THROWS_AS(generate_cubic(0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(generate_cubic(1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(generate_cubic(1.2, 4), std::invalid_argument);
}

TEST_CASE("zero-length sequences are rejected") {
  CHECK_THROWS_AS(generate_logistic(0.2, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_cubic(0.3, 0), std::invalid_argument);
}

TEST_CASE("modulate selects the map from the bit") {
  CHECK(modulate(0, 0.2, 4).map_id == MapId::kLogistic);
  CHECK(modulate(1, 0.3, 4).map_id == MapId::kCubic);
  CHECK_THROWS_AS(modulate(2, 0.2, 4), std::invalid_argument);
}

TEST_CASE("orbit ranges stay inside each map's invariant interval") {
  RngStream rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const double ls = draw_seed(MapId::kLogistic, 64, rng);
    for (double c : generate_logistic(ls, 64).chips) {
      CHECK(c > 0.0);
      CHECK(c <= 0.925);
    }
    const double cs = draw_seed(MapId::kCubic, 64, rng);
    for (double c : generate_cubic(cs, 64).chips) {
      CHECK(c >= -1.0);
      CHECK(c <= 1.0);
    }
  }
}

TEST_CASE("standardize produces zero mean and unit power") {
  ChipSequence seq;
  seq.chips = {2.0, 0.0};
  seq.map_id = MapId::kCubic;
  seq.seed = 0.3;
  const ChipSequence out = standardize(seq);
  REQUIRE(out.chips.size() == 2);
  CHECK(out.chips[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(out.chips[1] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(out.map_id == MapId::kCubic);
  CHECK(out.seed == 0.3);

  RngStream rng(4);
  const double s = draw_seed(MapId::kLogistic, 128, rng);
  const ChipSequence z = standardize(generate_logistic(s, 128));
  double mean = 0.0, power = 0.0;
  for (double c : z.chips) mean += c;
  mean /= 128.0;
  for (double c : z.chips) power += c * c;
  power /= 128.0;
  CHECK(mean == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(mean) < 1e-12);
  CHECK(power == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("standardize rejects degenerate input") {
  ChipSequence constant;
  constant.chips = {0.4, 0.4, 0.4};
  CHECK_THROWS_AS(standardize(constant), std::invalid_argument);
  ChipSequence single;
  single.chips = {0.4};
  CHECK_THROWS_AS(standardize(single), std::invalid_argument);
}

TEST_CASE("draw_seed only returns workable seeds") {
  RngStream rng(8);
  for (int i = 0; i < 500; ++i) {
    const double ls = draw_seed(MapId::kLogistic, 32, rng);
    CHECK(ls > 0.0);
    CHECK(ls < 1.0);
    CHECK_FALSE(degenerate_orbit(MapId::kLogistic, ls, 32));
    const double cs = draw_seed(MapId::kCubic, 32, rng);
    CHECK(cs > 0.0);
    CHECK(cs < 1.0);
    CHECK_FALSE(degenerate_orbit(MapId::kCubic, cs, 32));
  }
}

TEST_CASE("nearby seeds diverge quickly") {
  // Chaotic sensitivity: a 1e-9 seed perturbation grows past 0.1 within 60
  // iterations for both maps.
  double a = 0.371, b = 0.371 + 1e-9;
  bool diverged = false;
  for (int i = 0; i < 60 && !diverged; ++i) {
    a = logistic_step(a);
    b = logistic_step(b);
    diverged = std::abs(a - b) > 0.1;
  }
  CHECK(diverged);

  a = 0.371;
  b = 0.371 + 1e-9;
  diverged = false;
  for (int i = 0; i < 60 && !diverged; ++i) {
    a = cubic_step(a);
    b = cubic_step(b);
    diverged = std::abs(a - b) > 0.1;
  }
  CHECK(diverged);
}

TEST_CASE("single-step helpers match the recurrences") {
  CHECK(logistic_step(0.2) == doctest::Approx(0.592).epsilon(1e-15));
  CHECK(cubic_step(0.3) == doctest::Approx(-0.792).epsilon(1e-15));
}
