#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsieve/distributed.hpp"
#include "dsieve/instances.hpp"
#include "dsieve/rng.hpp"
#include "dsieve/sieve.hpp"

namespace dsieve {

enum class Mode { single, distributed };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

struct SolveConfig {
  Mode mode = Mode::single;
  int t = 1;
  Backend backend = Backend::analytic;
  /// Fresh labels per sieve run; default_budget(k) when unset.
  std::optional<std::uint64_t> budget;
  int qubit_cap = default_qubit_cap();
  SieveOptions sieve;
};

/// One recovered bit.
struct BitRecord {
  std::string stage;  // "single", "suffix" or "prefix"
  int bit = 0;        // position within that stage's shift
  int modulus_bits = 0;
  int parity = 0;
  SieveStats stats;
};

struct SolveReport {
  std::uint64_t a = 0;
  int n = 0;
  Mode mode = Mode::single;
  int t = 0;
  Backend backend = Backend::analytic;
  std::vector<BitRecord> bits;
  std::uint64_t rounds = 0;
  /// Smallest residual-branch fidelity seen on a circuit round with a known
  /// shift; absent when none was checked.
  std::optional<double> min_fidelity;
  std::uint64_t fidelity_checks = 0;
  /// Per-node ledger of the run (one node for single mode).
  CommLedger ledger;
  std::optional<bool> matches_planted;
};

/// Recovers the hidden shift bit by bit: sieve to l = M/2, read the parity,
/// halve, repeat. Distributed mode first recovers the n-t suffix bits with
/// node-local halving, then the t prefix bits from prefix_stage_instance with
/// the single-node path. The analytic backend requires a planted instance.
SolveReport recover_shift(const HiddenShiftInstance& instance, const SolveConfig& config, Rng& rng);

}  // namespace dsieve
