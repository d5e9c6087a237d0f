#include "doctest.h"

#include <cmath>
#include <numbers>

#include "dsieve/circuit.hpp"
#include "dsieve/errors.hpp"
#include "dsieve/sieve.hpp"

using namespace dsieve;

namespace {

void check_conservation(const SieveStats& s) {
  // Every label object is either consumed by a combination, discarded,
  // still waiting, or the final answer.
  const std::uint64_t finals = s.success ? 1 : 0;
  CHECK(s.fresh_drawn + s.combinations == 2 * s.combinations + s.discarded_total + s.survived_total + finals);
  // Fresh-label cost is conserved through combinations.
  CHECK(s.fresh_drawn == s.discarded_cost + s.survived_cost + s.final_cost);
  std::uint64_t drawn = 0, combined = 0, survived = 0;
  for (const auto& st : s.stages) {
    drawn += st.drawn;
    combined += st.combined;
    survived += st.survived;
    CHECK(st.produced + st.salvaged + st.discarded == st.combined);
    if (!s.salvage) CHECK(st.salvaged == 0);
  }
  CHECK(drawn + s.fresh_zero + (s.lucky_draw ? 1 : 0) == s.fresh_drawn);
  CHECK(combined == s.combinations);
  CHECK(survived == s.survived_total);
}

LabelSource analytic_source(std::uint64_t M, Rng& rng) {
  return [M, &rng](std::uint64_t i) {
    auto r = rng.child("fresh", i);
    return sample_label(M, r);
  };
}

}  // namespace

TEST_CASE("stage geometry") {
  CHECK(stage_width(1) == 0);
  CHECK(stage_width(2) == 1);
  CHECK(stage_width(3) == 2);
  CHECK(stage_width(5) == 2);
  CHECK(stage_width(10) == 3);
  CHECK(stage_width(17) == 4);
  CHECK(stage_count(1) == 0);
  CHECK(stage_count(2) == 1);
  CHECK(stage_count(3) == 1);
  CHECK(stage_count(10) == 3);
  CHECK(stage_count(11) == 3);
  CHECK(stage_count(17) == 4);
  CHECK(default_budget(4) == 64ULL << 4);
  CHECK(default_budget(16) == 64ULL << 16);
  CHECK(log2_modulus(32) == 5);
  CHECK_THROWS_AS(log2_modulus(12), InvalidParameters);
  CHECK_THROWS_AS(log2_modulus(1), InvalidParameters);
}

TEST_CASE("combine produces the sum or difference label") {
  Rng rng(5);
  int diffs = 0;
  const int trials = 4000;
  for (int i = 0; i < trials; ++i) {
    auto r = rng.child("t", static_cast<std::uint64_t>(i));
    const auto out = combine(PhaseLabel{6, 16, 2}, PhaseLabel{10, 16, 3}, r);
    CHECK(out.label.M == 16);
    CHECK(out.label.cost == 5);
    if (out.difference) {
      ++diffs;
      CHECK(out.label.l == 12);  // 6 - 10 mod 16
    } else {
      CHECK(out.label.l == 0);  // 6 + 10 mod 16
    }
  }
  CHECK(std::abs(diffs - trials / 2) < 3 * std::sqrt(trials / 4.0));
  CHECK_THROWS_AS(combine(PhaseLabel{1, 8}, PhaseLabel{1, 16}, rng), ModulusMismatch);
}

TEST_CASE("combine on simulated qubits keeps the phase relation") {
  // Enumerate every pair of labels for M = 8 and a fixed shift.
  const std::uint64_t M = 8;
  for (std::uint64_t s : {1U, 3U, 6U}) {
    for (std::uint64_t l1 = 0; l1 < M; ++l1) {
      for (std::uint64_t l2 = 0; l2 < M; ++l2) {
        Rng rng(l1 * 64 + l2 + 1000 * s);
        const PhaseLabel x{l1, M, 1, phase_state(l1, s, M)};
        const PhaseLabel y{l2, M, 1, phase_state(l2, s, M)};
        const auto out = combine(x, y, rng);
        const std::uint64_t expect = out.difference ? (l1 + M - l2) % M : (l1 + l2) % M;
        REQUIRE(out.label.l == expect);
        REQUIRE(out.label.qubit.has_value());
        const auto ref = phase_state(expect, s, M);
        const auto& q = *out.label.qubit;
        const auto overlap = std::conj(ref[0]) * q[0] + std::conj(ref[1]) * q[1];
        REQUIRE(std::norm(overlap) == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("sieve reaches M/2 and conserves labels") {
  for (int k = 1; k <= 14; ++k) {
    const std::uint64_t M = std::uint64_t{1} << k;
    for (bool salvage : {true, false}) {
      Rng rng(static_cast<std::uint64_t>(k * 10 + salvage));
      const auto result = run_sieve(analytic_source(M, rng), M, default_budget(k), rng, SieveOptions{salvage});
      CHECK(result.label.l == M / 2);
      CHECK(result.stats.success);
      CHECK(result.stats.stages.size() == static_cast<std::size_t>(stage_count(k)));
      check_conservation(result.stats);
    }
  }
}

TEST_CASE("sieve budget exhaustion carries partial stats") {
  Rng rng(1);
  try {
    run_sieve(analytic_source(1 << 12, rng), 1 << 12, 10, rng);
    FAIL("expected Exhausted");
  } catch (const Exhausted& e) {
    CHECK(e.budget() == 10);
    CHECK(e.stats().fresh_drawn == 10);
    CHECK_FALSE(e.stats().success);
    check_conservation(e.stats());
  }
}

TEST_CASE("lucky first draw and zero draws") {
  Rng rng(2);
  const LabelSource src = [](std::uint64_t i) { return PhaseLabel{i < 3 ? 0U : 32U, 64, 1}; };
  const auto r = run_sieve(src, 64, 100, rng);
  CHECK(r.stats.fresh_drawn == 4);
  CHECK(r.stats.fresh_zero == 3);
  CHECK(r.stats.lucky_draw);
  CHECK(r.stats.final_cost == 1);
  check_conservation(r.stats);

  const LabelSource wrong = [](std::uint64_t) { return PhaseLabel{1, 32, 1}; };
  CHECK_THROWS_AS(run_sieve(wrong, 64, 100, rng), ModulusMismatch);
}

TEST_CASE("sieve is deterministic in its seed") {
  auto once = [](std::uint64_t seed) {
    Rng rng(seed);
    return run_sieve(analytic_source(1 << 10, rng), 1 << 10, default_budget(10), rng).stats;
  };
  const auto a = once(9), b = once(9);
  CHECK(a.fresh_drawn == b.fresh_drawn);
  CHECK(a.combinations == b.combinations);
  CHECK(a.final_cost == b.final_cost);
}

TEST_CASE("mean fresh labels grow with k") {
  double previous = 0;
  for (int k = 4; k <= 20; k += 4) {
    const std::uint64_t M = std::uint64_t{1} << k;
    double total = 0;
    const int runs = 12;
    for (int r = 0; r < runs; ++r) {
      Rng rng(static_cast<std::uint64_t>(1000 * k + r));
      total += static_cast<double>(run_sieve(analytic_source(M, rng), M, default_budget(k), rng).stats.fresh_drawn);
    }
    const double mean = total / runs;
    CHECK(mean > previous);
    previous = mean;
  }
}

TEST_CASE("parity extraction") {
  Rng rng(4);
  for (std::uint64_t s : {0U, 1U, 6U, 7U}) {
    for (int rep = 0; rep < 50; ++rep) {
      CHECK(extract_parity(PhaseLabel{8, 16}, s, rng) == static_cast<int>(s & 1U));
      CHECK(extract_parity(PhaseLabel{8, 16, 1, phase_state(8, s, 16)}, std::nullopt, rng) == static_cast<int>(s & 1U));
    }
  }
  CHECK_THROWS_AS(extract_parity(PhaseLabel{4, 16}, 3, rng), NotSievedToTarget);
  CHECK_THROWS_AS(extract_parity(PhaseLabel{8, 16}, std::nullopt, rng), MissingGroundTruth);
}

TEST_CASE("stats csv") {
  SieveStats s;
  s.stages.push_back(StageStats{1, 0, 2, 5, 7, 3, 1, 0, 2, 1});
  CHECK(sieve_stats_csv(s) == "stage,drawn,combined,discarded,survived\n1,5,3,2,1\n");
}
