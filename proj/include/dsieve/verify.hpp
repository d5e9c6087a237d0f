#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsieve/instances.hpp"
#include "dsieve/phase_label.hpp"
#include "dsieve/rng.hpp"

namespace dsieve {

/// Outcome of one statistical or exhaustive check. `pass` holds exactly when
/// `statistic` is on the accepting side of `threshold` (direction given by
/// `pass_above`).
struct StatReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass_above = true;
  bool pass = false;
  std::uint64_t samples = 0;
  std::string detail;
};

inline constexpr double kSignificance = 1e-3;

/// The unique a' with f(x) = g(x + a') for all x, by trying every candidate.
/// nullopt when no candidate fits.
std::optional<std::uint64_t> brute_force_shift(const HiddenShiftInstance& instance);

/// Pearson chi-square of `samples` against uniform on Z_M; statistic is the
/// p-value, pass iff p > 0.001. Needs at least 16 * M samples.
StatReport chi_square_uniform(std::span<const std::uint64_t> samples, std::uint64_t M,
                              const std::string& name = "chi_square_uniform");

/// Two-sample chi-square homogeneity test on histograms over Z_M.
StatReport chi_square_two_sample(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                 std::uint64_t M, const std::string& name = "chi_square_two_sample");

/// Produces the index-th label for a backend comparison.
using RoundSampler = std::function<PhaseLabel(std::uint64_t index)>;

struct BackendComparison {
  StatReport histogram;
  std::uint64_t fidelity_checks = 0;
  std::uint64_t fidelity_failures = 0;
  double min_fidelity = 1.0;
  std::vector<std::uint64_t> circuit_labels;
  std::vector<std::uint64_t> analytic_labels;
  bool pass = false;
};

/// Circuit rounds vs analytic samples on one instance. t = 0 selects the
/// single-node round, t >= 1 the distributed round. Fidelity of every circuit
/// round must exceed 1 - 1e-10.
BackendComparison compare_backends(const HiddenShiftInstance& instance, int t, std::uint64_t rounds,
                                   Rng& rng);

/// Same harness with injected samplers; `circuit_fidelity` may be empty.
BackendComparison compare_samplers(const RoundSampler& circuit, const RoundSampler& analytic,
                                   std::uint64_t M, std::uint64_t rounds,
                                   const std::function<std::optional<double>(std::uint64_t)>& circuit_fidelity = {});

inline constexpr double kFidelityTolerance = 1e-10;

}  // namespace dsieve
