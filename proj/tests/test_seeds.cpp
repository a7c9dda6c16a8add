#include <doctest.h>

#include <cmath>
#include <vector>

#include "cntpuf/seeds.hpp"

using namespace cntpuf;

TEST_CASE("same seed reproduces the same draw sequence") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derived streams are distinct and stable") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}

TEST_CASE("uniform draws stay in [0, 1)") {
  Rng rng(9);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("log-uniform draws respect their bounds") {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.next_log_uniform(1e-12, 4e-12);
    CHECK(x >= 1e-12);
    CHECK(x <= 4e-12);
  }
  CHECK(rng.next_log_uniform(3e-9, 3e-9) == 3e-9);
  CHECK(rng.next_log_uniform(0.0, 0.0) == 0.0);
}

TEST_CASE("normal draws have standard moments") {
  Rng rng(13);
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.next_normal();
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}
