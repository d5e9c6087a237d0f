#include "doctest.h"

#include "dsieve/errors.hpp"
#include "dsieve/recover.hpp"
#include "dsieve/verify.hpp"

using namespace dsieve;

TEST_CASE("single-node and distributed solves on the experiment instance") {
  for (Mode mode : {Mode::single, Mode::distributed}) {
    for (Backend backend : {Backend::analytic, Backend::circuit}) {
      SolveConfig cfg;
      cfg.mode = mode;
      cfg.backend = backend;
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(seed);
        const auto r = recover_shift(load_table1(), cfg, rng);
        CHECK(r.a == 7);
        CHECK(r.matches_planted == std::optional<bool>(true));
        CHECK(r.bits.size() == 3);
        if (backend == Backend::circuit) {
          REQUIRE(r.min_fidelity.has_value());
          CHECK(*r.min_fidelity > 1 - 1e-10);
          CHECK(r.fidelity_checks == r.rounds);
        }
      }
    }
  }
}

TEST_CASE("bit records follow the stage order") {
  SolveConfig cfg;
  cfg.mode = Mode::distributed;
  cfg.t = 2;
  Rng rng(6);
  const auto r = recover_shift(generate_instance(6, 7, 45, 1), cfg, rng);
  CHECK(r.a == 45);
  REQUIRE(r.bits.size() == 6);
  for (int i = 0; i < 4; ++i) {
    CHECK(r.bits[static_cast<std::size_t>(i)].stage == "suffix");
    CHECK(r.bits[static_cast<std::size_t>(i)].modulus_bits == 4 - i);
    CHECK(r.bits[static_cast<std::size_t>(i)].parity == ((45 >> i) & 1));
  }
  CHECK(r.bits[4].stage == "prefix");
  CHECK(r.bits[5].parity == ((45 >> 5) & 1));
}

TEST_CASE("circuit backend solves blind instances") {
  SolveConfig cfg;
  cfg.backend = Backend::circuit;
  Rng rng(7);
  const auto r = recover_shift(generate_instance(5, 6, 19, 2).blind(), cfg, rng);
  CHECK(r.a == 19);
  CHECK_FALSE(r.matches_planted.has_value());
  CHECK(r.fidelity_checks == 0);

  cfg.mode = Mode::distributed;
  cfg.t = 1;
  Rng rng2(8);
  CHECK(recover_shift(generate_instance(5, 5, 19, 2).blind(), cfg, rng2).a == 19);
}

TEST_CASE("analytic backend needs the planted shift") {
  Rng rng(1);
  CHECK_THROWS_AS(recover_shift(load_table1().blind(), SolveConfig{}, rng), MissingGroundTruth);
}

TEST_CASE("invalid split and exhausted budget") {
  SolveConfig cfg;
  cfg.mode = Mode::distributed;
  cfg.t = 3;
  Rng rng(1);
  CHECK_THROWS_AS(recover_shift(load_table1(), cfg, rng), InvalidParameters);
  SolveConfig tight;
  tight.budget = 2;
  CHECK_THROWS_AS(recover_shift(generate_instance(12, 12, 1001, 1), tight, rng), Exhausted);
}

TEST_CASE("circuit cap is enforced during a solve") {
  SolveConfig cfg;
  cfg.mode = Mode::distributed;
  cfg.backend = Backend::circuit;
  cfg.qubit_cap = 10;
  Rng rng(1);
  CHECK_THROWS_AS(recover_shift(load_table1(), cfg, rng), BackendTooLarge);
}

TEST_CASE("solves are reproducible from the seed") {
  SolveConfig cfg;
  cfg.mode = Mode::distributed;
  cfg.t = 3;
  Rng a(99), b(99);
  const auto ra = recover_shift(generate_instance(10, 10, 600, 4), cfg, a);
  const auto rb = recover_shift(generate_instance(10, 10, 600, 4), cfg, b);
  CHECK(ra.rounds == rb.rounds);
  CHECK(ra.ledger.total_gates() == rb.ledger.total_gates());
}

TEST_CASE("random instances recover in both modes") {
  Rng rng(10);
  for (int i = 0; i < 20; ++i) {
    const int n = 2 + static_cast<int>(rng.below(10));
    const auto inst = generate_instance(n, n + 1, rng.below(1ULL << n), rng.next());
    SolveConfig cfg;
    auto r1 = rng.child("s", static_cast<std::uint64_t>(i));
    CHECK(recover_shift(inst, cfg, r1).a == *inst.hidden_a());
    cfg.mode = Mode::distributed;
    cfg.t = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
    auto r2 = rng.child("d", static_cast<std::uint64_t>(i));
    CHECK(recover_shift(inst, cfg, r2).a == brute_force_shift(inst.blind()));
  }
}
