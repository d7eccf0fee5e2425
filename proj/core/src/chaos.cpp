#include "chaosnoma/chaos.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace chaosnoma {

namespace {

constexpr double kLogisticRate = 3.7;

void check_beta(std::size_t beta) {
  if (beta == 0) throw std::invalid_argument("chip count must be positive");
}

}  // namespace

double logistic_step(double x) { return kLogisticRate * x * (1.0 - x); }

double cubic_step(double x) { return 4.0 * x * x * x - 3.0 * x; }

ChipSequence generate_logistic(double seed, std::size_t beta) {
  check_beta(beta);
  if (!(seed > 0.0) || !(seed < 1.0))
    throw std::invalid_argument("logistic seed must lie in (0, 1)");
  ChipSequence out;
  out.map_id = MapId::kLogistic;
  out.seed = seed;
  out.chips.resize(beta);
  double x = seed;
  for (std::size_t k = 0; k < beta; ++k) {
    x = logistic_step(x);
    out.chips[k] = x;
  }
  return out;
}

ChipSequence generate_cubic(double seed, std::size_t beta) {
  check_beta(beta);
  if (!(seed > 0.0) || !(seed < 1.0))
    throw std::invalid_argument("cubic seed must lie in (0, 1)");
  if (degenerate_orbit(MapId::kCubic, seed, beta))
    throw std::invalid_argument(
        "cubic seed is degenerate: orbit reaches a fixed point");
  ChipSequence out;
  out.map_id = MapId::kCubic;
  out.seed = seed;
  out.chips.resize(beta);
  double x = seed;
  for (std::size_t k = 0; k < beta; ++k) {
    x = cubic_step(x);
    out.chips[k] = x;
  }
  return out;
}

ChipSequence modulate(Bit bit, double seed, std::size_t beta) {
  if (bit > 1) throw std::invalid_argument("bit must be 0 or 1");
  return bit == 0 ? generate_logistic(seed, beta) : generate_cubic(seed, beta);
}

ChipSequence standardize(const ChipSequence& sequence) {
  const std::size_t n = sequence.chips.size();
  if (n < 2)
    throw std::invalid_argument("standardize needs at least two chips");
  double mean = 0.0;
  for (double c : sequence.chips) mean += c;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double c : sequence.chips) var += (c - mean) * (c - mean);
  var /= static_cast<double>(n);
  // A constant sequence can leave a nonzero variance of order (eps*mean)^2
  // from the mean's rounding, so the guard sits at that noise floor rather
  // than at exact zero.
  const double eps = std::numeric_limits<double>::epsilon();
  const double noise = (std::abs(mean) + 1.0) * eps;
  if (!(var > noise * noise * static_cast<double>(n)))
    throw std::invalid_argument("standardize needs nonzero chip variance");
  const double inv_std = 1.0 / std::sqrt(var);
  ChipSequence out = sequence;
  for (double& c : out.chips) c = (c - mean) * inv_std;
  return out;
}

bool degenerate_orbit(MapId map, double seed, std::size_t beta) {
  double x = seed;
  for (std::size_t k = 0; k < beta; ++k) {
    x = map == MapId::kLogistic ? logistic_step(x) : cubic_step(x);
    // An iterate pinned against a fixed point (0 for both maps, +-1 for the
    // cubic map, 1 -> 0 for the logistic map) kills the orbit's variance.
    const double mag = std::abs(x);
    if (mag <= kDegenerateEps || mag >= 1.0 - kDegenerateEps) return true;
  }
  return false;
}

double draw_seed(MapId map, std::size_t beta, RngStream& rng) {
  // Initial conditions are drawn uniformly on (0, 1) for both maps and
  // resampled while the resulting orbit is degenerate.
  for (;;) {
    const double seed = rng.uniform_open01();
    if (!degenerate_orbit(map, seed, beta)) return seed;
  }
}

}  // namespace chaosnoma
