#include "doctest.h"

#include <set>

#include "dsieve/rng.hpp"

using dsieve::Rng;

TEST_CASE("splitmix64 reference stream") {
  // First outputs of SplitMix64 seeded with 1234567 (Vigna's reference code).
  Rng rng(1234567);
  CHECK(rng.next() == 6457827717110365317ULL);
  CHECK(rng.next() == 3203168211198807973ULL);
  CHECK(rng.next() == 9817491932198370423ULL);
}

TEST_CASE("child streams depend on key and seed, not on parent draws") {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 10; ++i) b.next();
  CHECK(a.child("measure", 3).next() == b.child("measure", 3).next());
  CHECK(a.child("measure", 3).next() != a.child("measure", 4).next());
  CHECK(a.child("measure", 3).next() != Rng(43).child("measure", 3).next());
}

TEST_CASE("below stays in range and hits every value") {
  Rng rng(7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = rng.below(12);
    REQUIRE(v < 12);
    seen.insert(v);
  }
  CHECK(seen.size() == 12);
  for (int i = 0; i < 100; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
