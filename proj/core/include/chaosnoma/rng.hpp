#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace chaosnoma {

// One splitmix64 mixing step.  Used to derive decorrelated substream seeds
// from a (master seed, stream id) pair.
std::uint64_t splitmix64(std::uint64_t x);

// A self-contained random stream.  All floating point draws are produced by
// explicit arithmetic on raw 64-bit engine output, so a given seed yields the
// same sequence on every standard-conforming platform (modulo libm rounding
// in log/cos/sin for the normal draws).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on the open interval (0, 1); safe to pass through log().
  double uniform_open01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  double uniform_range(double lo, double hi) {
    return lo + (hi - lo) * uniform();
  }

  // Unbiased integer on [0, bound); bound must be nonzero.
  std::uint64_t uniform_int(std::uint64_t bound);

  // Standard normal via Box-Muller; generates pairs, caches the spare.
  double normal();

  // Circularly symmetric complex normal with E|z|^2 = 1.
  std::complex<double> cnormal() {
    constexpr double kHalfSqrt = 0.70710678118654752440;
    return {normal() * kHalfSqrt, normal() * kHalfSqrt};
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Derives the stream for (master_seed, stream_id).  Streams with distinct ids
// are statistically independent for simulation purposes.
RngStream seed_stream(std::uint64_t master_seed, std::uint64_t stream_id);

// The 64-bit seed behind seed_stream(master_seed, stream_id); lets a derived
// value act as the master seed of a whole sub-pipeline (e.g. adversary
// training inside one sweep point).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id);

// Stream id composition: a purpose tag in the top byte keeps id spaces of
// different simulation phases (dataset, trials, reconstruction, ...) disjoint.
constexpr std::uint64_t stream_id(std::uint64_t purpose, std::uint64_t index) {
  return (purpose << 56) | (index & 0x00FF'FFFF'FFFF'FFFFULL);
}

namespace stream_purpose {
constexpr std::uint64_t kDataset = 1;   // dataset sample generation
constexpr std::uint64_t kTrial = 2;     // Monte-Carlo trial blocks
constexpr std::uint64_t kInit = 3;      // network weight initialization
constexpr std::uint64_t kShuffle = 4;   // training epoch shuffles
constexpr std::uint64_t kEveBlock = 5;  // adversary channel/noise draws
constexpr std::uint64_t kEveTrain = 6;  // adversary clustering and training
}  // namespace stream_purpose

}  // namespace chaosnoma
