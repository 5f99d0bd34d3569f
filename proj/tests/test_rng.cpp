#include "chaospriv/rng.hpp"

#include <cstdint>
#include <vector>

#include "doctest.h"

using namespace chaospriv;

TEST_CASE("rng determinism") {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.bits() == b.bits());

  Rng c(42);
  Rng d(43);
  bool all_equal = true;
  for (int i = 0; i < 10; ++i) all_equal &= (c.bits() == d.bits());
  CHECK(!all_equal);
}

TEST_CASE("uniform draws live in [0, 1) and average to one half") {
  Rng rng(1);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("uniform range endpoints") {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform(-3.0, 5.0);
    CHECK(u >= -3.0);
    CHECK(u < 5.0);
  }
}

TEST_CASE("below is uniform over residues") {
  Rng rng(3);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t v = rng.below(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  // Expected 10000 per bucket, sd ~ 93; +-500 is beyond 5 sigma.
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("seed derivation separates purposes") {
  const std::uint64_t root = 1234;
  CHECK(derive_seed(root, "a") == derive_seed(root, "a"));
  CHECK(derive_seed(root, "a") != derive_seed(root, "b"));
  CHECK(derive_seed(root, "a") != derive_seed(root + 1, "a"));
  // Purpose strings that share a prefix still split.
  CHECK(derive_seed(root, "run.1") != derive_seed(root, "run.10"));
}
