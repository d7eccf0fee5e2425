#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chaosnoma/rng.hpp"

namespace chaosnoma {

using Bit = std::uint8_t;

// Which chaotic map produced a chip sequence.  Bit 0 is carried by the
// logistic map, bit 1 by the cubic map, so a receiver that can tell the two
// waveform families apart can read the bit.
enum class MapId : std::uint8_t { kLogistic = 0, kCubic = 1 };

// One spreading sequence of beta chips plus its provenance.
struct ChipSequence {
  std::vector<double> chips;
  MapId map_id = MapId::kLogistic;
  double seed = 0.0;  // initial condition that generated the chips
};

// Logistic map x_{k} = 3.7 * x_{k-1} * (1 - x_{k-1}).  The first chip is the
// seed iterated once.  Orbits live in (0, 0.925] for seeds in (0, 1).
ChipSequence generate_logistic(double seed, std::size_t beta);

// Cubic map x_{k} = 4 x_{k-1}^3 - 3 x_{k-1} on [-1, 1]; the first chip is the
// seed iterated once.  Seeds come from (0, 1) and must have a non-degenerate
// orbit (e.g. 0.5 maps to the fixed point -1 and is rejected).
ChipSequence generate_cubic(double seed, std::size_t beta);

// Maps a bit to its spreading waveform: 0 -> logistic, 1 -> cubic.
ChipSequence modulate(Bit bit, double seed, std::size_t beta);

// Returns a copy scaled to zero mean and unit sample variance (population
// variance, i.e. divide by beta).  Requires beta >= 2 and nonzero variance.
ChipSequence standardize(const ChipSequence& sequence);

// True when the orbit started at `seed` collapses: any of the first beta
// iterates lands within kDegenerateEps of a fixed point or leaves the map's
// invariant interval.  Such seeds produce non-chaotic chips and are rejected.
bool degenerate_orbit(MapId map, double seed, std::size_t beta);

// Draws a seed uniformly on (0, 1), resampling until the orbit is
// non-degenerate for the requested map.
double draw_seed(MapId map, std::size_t beta, RngStream& rng);

// Single iterate of each map, exposed for oracles and property tests.
double logistic_step(double x);
double cubic_step(double x);

// Tolerance below which an orbit sample counts as stuck on a fixed point.
inline constexpr double kDegenerateEps = 1e-12;

}  // namespace chaosnoma
