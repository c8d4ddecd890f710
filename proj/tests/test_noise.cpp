#include <doctest.h>

#include <cmath>

#include "delaudit/noise.hpp"

using namespace delaudit;

TEST_CASE("counts sum to 2^w and every atom owns a draw") {
  TruncatedGeometricNoise noise(1.0, 8, 16);
  uint64_t total = 0;
  for (int z = -8; z <= 8; ++z) {
    CHECK(noise.count_of(z) >= 1);
    total += noise.count_of(z);
  }
  CHECK(total == (uint64_t(1) << 16));
  CHECK(noise.pmf().is_normalized());
}

TEST_CASE("all-zeros draw maps to -B and sampling consumes exactly w bits") {
  TruncatedGeometricNoise noise(1.0, 8, 16);
  std::vector<bool> zeros(16, false);
  RandomTape t = RandomTape::from_bits(zeros);
  CHECK(noise.sample(t) == -8);
  CHECK(t.cursor() == 16);

  RandomTape t2(99, 64);
  for (int i = 0; i < 4; ++i) {
    uint64_t before = t2.cursor();
    noise.sample(t2);
    CHECK(t2.cursor() - before == 16);
  }
}

TEST_CASE("full-enumeration histogram matches the count table exactly") {
  TruncatedGeometricNoise noise(1.0, 8, 16);
  std::vector<uint64_t> hist(17, 0);
  long double mean_num = 0;
  for (uint64_t u = 0; u < (uint64_t(1) << 16); ++u) {
    int64_t z = noise.value_of_draw(u);
    hist[z + 8]++;
    mean_num += static_cast<long double>(z);
  }
  for (int z = -8; z <= 8; ++z) CHECK(hist[z + 8] == noise.count_of(z));
  // Symmetric counts make the enumerated mean exactly zero.
  CHECK(std::abs(static_cast<double>(mean_num) / 65536.0) <= std::pow(2.0, -15));

  // pmf(0) tracks the renormalized closed form up to quantization.
  long double q = std::exp(-1.0L);
  long double formula = (1 - q) / (1 + q - 2 * powl(q, 9));
  double realized = static_cast<double>(noise.count_of(0)) / 65536.0;
  CHECK(std::abs(realized - static_cast<double>(formula)) < 17.0 / 65536.0 + 1e-9);
}

TEST_CASE("neighboring shifts respect the design ratio away from the boundary") {
  TruncatedGeometricNoise noise(1.0, 16, 12);
  long double e = std::exp(1.0L);
  for (int z = -15; z <= 16; ++z) {
    // count(z) <= e^eps * count(z-1) up to one ulp of the ceil construction.
    CHECK(static_cast<long double>(noise.count_of(z)) <=
          e * static_cast<long double>(noise.count_of(z - 1)) + 1e-6);
  }
}

TEST_CASE("fibers are contiguous and ordered") {
  TruncatedGeometricNoise noise(0.5, 6, 10);
  uint64_t expected_begin = 0;
  for (int z = -6; z <= 6; ++z) {
    CHECK(noise.fiber_begin(z) == expected_begin);
    CHECK(noise.value_of_draw(noise.fiber_begin(z)) == z);
    expected_begin += noise.count_of(z);
  }
}

TEST_CASE("tail deficit shrinks with wider supports") {
  TruncatedGeometricNoise narrow(1.0, 4, 12);
  TruncatedGeometricNoise wide(1.0, 24, 12);
  CHECK(wide.tail_deficit() < narrow.tail_deficit());
  CHECK(wide.tail_deficit() > 0.0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(TruncatedGeometricNoise(0.0, 8, 10), ParameterError);
  CHECK_THROWS_AS(TruncatedGeometricNoise(1.0, 0, 10), ParameterError);
  CHECK_THROWS_AS(TruncatedGeometricNoise(1.0, 600, 10), ParameterError);
}
