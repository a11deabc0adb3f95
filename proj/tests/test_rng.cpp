#include <cmath>

#include "doctest.h"
#include "maxdissent/rng.hpp"

using namespace maxdissent;

TEST_CASE("identical seeds give identical draw sequences") {
  Rng a(42), b(42);
  for (int k = 0; k < 1000; ++k) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("substreams of one base seed are distinct") {
  const std::uint64_t base = 123;
  CHECK(substream_seed(base, 1) != substream_seed(base, 2));
  CHECK(substream_seed(base, 1) != substream_seed(base, kFixedStreamBase));
}

TEST_CASE("uniform_index stays in range and looks uniform") {
  Rng rng(7);
  int counts[10] = {};
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) {
    const int v = rng.uniform_index(10);
    REQUIRE(v >= 0);
    REQUIRE(v < 10);
    ++counts[v];
  }
  for (int c : counts) CHECK(std::abs(c - draws / 10) < 500);  // ~5 sigma
}

TEST_CASE("uniform01 lies in [0,1)") {
  Rng rng(9);
  for (int k = 0; k < 10000; ++k) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("normal has roughly standard moments") {
  Rng rng(11);
  const int draws = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < draws; ++k) {
    const double v = rng.normal();
    sum += v;
    sum_sq += v * v;
  }
  CHECK(std::abs(sum / draws) < 0.01);
  CHECK(std::abs(sum_sq / draws - 1.0) < 0.02);
}
