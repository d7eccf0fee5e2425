#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "chaosnoma/rng.hpp"

using namespace chaosnoma;

TEST_CASE("uniform draws lie in [0, 1) and are reproducible") {
  RngStream a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    CHECK(x == b.uniform());
  }
}

TEST_CASE("uniform_open01 never returns an endpoint") {
  RngStream rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform_open01();
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("uniform_int is unbiased over a small bound") {
  RngStream rng(3);
  std::vector<int> counts(5, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[rng.uniform_int(5)];
  for (int c : counts) {
    // n p = 20000, sigma = sqrt(n p (1-p)) = 126.5; allow 5 sigma.
    CHECK(c > 20000 - 633);
    CHECK(c < 20000 + 633);
  }
  CHECK_THROWS_AS(rng.uniform_int(0), std::invalid_argument);
}

TEST_CASE("uniform_range covers its interval") {
  RngStream rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform_range(24.0, 28.0);
    CHECK(x >= 24.0);
    CHECK(x < 28.0);
  }
}

TEST_CASE("normal moments match a standard Gaussian") {
  RngStream rng(5);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("complex normal has unit average power split over both parts") {
  RngStream rng(9);
  const int n = 100000;
  double power = 0.0, re = 0.0, im = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::complex<double> z = rng.cnormal();
    power += std::norm(z);
    re += z.real();
    im += z.imag();
  }
  CHECK(std::abs(power / n - 1.0) < 0.03);
  CHECK(std::abs(re / n) < 0.02);
  CHECK(std::abs(im / n) < 0.02);
}

TEST_CASE("seed_stream: identical inputs give identical first 100 draws") {
  RngStream a = seed_stream(123, stream_id(stream_purpose::kTrial, 9));
  RngStream b = seed_stream(123, stream_id(stream_purpose::kTrial, 9));
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("seed_stream: distinct ids share no draw in their first 100") {
  RngStream a = seed_stream(123, stream_id(stream_purpose::kTrial, 1));
  RngStream b = seed_stream(123, stream_id(stream_purpose::kTrial, 2));
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) seen.insert(a.next_u64());
  for (int i = 0; i < 100; ++i) CHECK(seen.count(b.next_u64()) == 0);
}

TEST_CASE("stream ids keep purpose spaces disjoint") {
  CHECK(stream_id(stream_purpose::kDataset, 5) !=
        stream_id(stream_purpose::kTrial, 5));
  CHECK(stream_id(stream_purpose::kTrial, (std::uint64_t{3} << 40) | 7) !=
        stream_id(stream_purpose::kTrial, (std::uint64_t{7} << 40) | 3));
}

TEST_CASE("derive_seed matches the stream construction") {
  RngStream direct = seed_stream(77, 5);
  RngStream via(derive_seed(77, 5));
  for (int i = 0; i < 10; ++i) CHECK(direct.next_u64() == via.next_u64());
}
