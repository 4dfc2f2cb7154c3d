#include "doctest.h"

#include <cmath>

#include "sbmrate/rng.hpp"

using namespace sbmrate;

TEST_CASE("derived streams are reproducible and distinct") {
  Rng a = Rng::derive({1, 2, 3}), b = Rng::derive({1, 2, 3}), c = Rng::derive({1, 2, 4});
  CHECK(a.seed() == b.seed());
  CHECK(a.seed() != c.seed());
  for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(Rng::derive({1, 2}).seed() != Rng::derive({2, 1}).seed());
}

TEST_CASE("split does not advance the parent") {
  Rng a(9), b(9);
  Rng child = a.split(5);
  CHECK(a.next_u64() == b.next_u64());
  CHECK(child.seed() == Rng(9).split(5).seed());
}

TEST_CASE("uniform and below stay in range with the right mean") {
  Rng r(123);
  double s = 0.0;
  const int m = 100000;
  for (int i = 0; i < m; ++i) {
    double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    s += u;
  }
  CHECK(std::abs(s / m - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / m) * 1.5);
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 30000; ++i) ++counts[r.below(3)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 4 * std::sqrt(30000 * 2.0 / 9.0));
}
