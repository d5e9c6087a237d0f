#include "doctest.h"

#include <vector>

#include "dsieve/errors.hpp"
#include "dsieve/verify.hpp"

using namespace dsieve;

TEST_CASE("brute_force_shift") {
  CHECK(brute_force_shift(load_table1().blind()) == std::optional<std::uint64_t>(7));
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const auto a = rng.below(256);
    CHECK(brute_force_shift(generate_instance(8, 8, a, rng.next()).blind()) == std::optional<std::uint64_t>(a));
  }
  const HiddenShiftInstance none(2, 2, {0, 1, 2, 3}, {3, 2, 1, 0});
  CHECK_FALSE(brute_force_shift(none).has_value());
  const HiddenShiftInstance many(1, 1, {0, 0}, {0, 0});
  CHECK_THROWS_AS(brute_force_shift(many), VerificationFailure);
}

TEST_CASE("chi-square against uniform") {
  Rng rng(2);
  std::vector<std::uint64_t> uniform(4096);
  for (auto& v : uniform) v = rng.below(8);
  const auto ok = chi_square_uniform(uniform, 8);
  CHECK(ok.pass);
  CHECK(ok.statistic > kSignificance);
  CHECK(ok.samples == 4096);

  std::vector<std::uint64_t> skewed(4096);
  for (auto& v : skewed) v = rng.below(10) % 8;
  const auto bad = chi_square_uniform(skewed, 8);
  CHECK_FALSE(bad.pass);
  CHECK(bad.statistic < kSignificance);

  // Exact counts give a statistic of zero, so p = 1.
  std::vector<std::uint64_t> exact;
  for (int rep = 0; rep < 16; ++rep) {
    for (std::uint64_t v = 0; v < 4; ++v) exact.push_back(v);
  }
  CHECK(chi_square_uniform(exact, 4).statistic == doctest::Approx(1.0));

  CHECK_THROWS_AS(chi_square_uniform(std::vector<std::uint64_t>(10, 0), 4), InvalidParameters);
  CHECK_THROWS_AS(chi_square_uniform(std::vector<std::uint64_t>(64, 4), 4), InvalidParameters);
}

TEST_CASE("two-sample homogeneity") {
  Rng rng(3);
  std::vector<std::uint64_t> a(2048), b(2048), c(2048);
  for (auto& v : a) v = rng.below(16);
  for (auto& v : b) v = rng.below(16);
  for (auto& v : c) v = rng.below(8);
  CHECK(chi_square_two_sample(a, b, 16).pass);
  CHECK_FALSE(chi_square_two_sample(a, c, 16).pass);
}

TEST_CASE("backend comparison on the experiment instance") {
  Rng rng(4);
  for (int t : {0, 1}) {
    const auto cmp = compare_backends(load_table1(), t, 512, rng);
    CHECK(cmp.pass);
    CHECK(cmp.histogram.pass);
    CHECK(cmp.fidelity_checks == 512);
    CHECK(cmp.fidelity_failures == 0);
    CHECK(cmp.min_fidelity > 1 - kFidelityTolerance);
    CHECK(cmp.circuit_labels.size() == 512);
  }
}

TEST_CASE("comparison harness flags a biased sampler") {
  Rng rng(5);
  const RoundSampler fair = [&](std::uint64_t i) {
    auto r = rng.child("fair", i);
    return PhaseLabel{r.below(4), 4};
  };
  const RoundSampler biased = [&](std::uint64_t i) {
    auto r = rng.child("bias", i);
    return PhaseLabel{r.below(3), 4};
  };
  CHECK(compare_samplers(fair, fair, 4, 1024).pass);
  CHECK_FALSE(compare_samplers(biased, fair, 4, 1024).pass);
  const auto low = compare_samplers(fair, fair, 4, 256, [](std::uint64_t i) {
    return std::optional<double>(i == 7 ? 0.5 : 1.0);
  });
  CHECK_FALSE(low.pass);
  CHECK(low.fidelity_failures == 1);
  CHECK(low.min_fidelity == doctest::Approx(0.5));
}

TEST_CASE("brute_force_shift recovers the generator's shift up to n=14") {
  Rng rng(14);
  for (int n = 1; n <= 14; ++n) {
    const auto a = rng.below(1ULL << n);
    CHECK(brute_force_shift(generate_instance(n, n, a, rng.next()).blind()) == std::optional<std::uint64_t>(a));
  }
}
