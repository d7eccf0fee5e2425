#include "chaosnoma/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chaosnoma {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t RngStream::uniform_int(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_int: bound must be nonzero");
  // Rejection sampling over the largest multiple of bound below 2^64.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) return x % bound;
  }
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open01();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id) {
  std::uint64_t h = splitmix64(master_seed);
  h ^= splitmix64(stream_id + 0x9E3779B97F4A7C15ULL);
  return splitmix64(h);
}

RngStream seed_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
  return RngStream(derive_seed(master_seed, stream_id));
}

}  // namespace chaosnoma
