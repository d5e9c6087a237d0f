#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dsieve/errors.hpp"
#include "dsieve/phase_label.hpp"
#include "dsieve/rng.hpp"

namespace dsieve {

struct StageStats {
  int stage = 0;              // 1-based
  int low_bit = 0;            // first matching bit
  int width = 0;              // matching bits in this stage
  std::uint64_t drawn = 0;    // fresh labels admitted directly here
  std::uint64_t admitted = 0; // every label inserted into this stage
  std::uint64_t combined = 0; // pairings performed (each consumes two labels)
  std::uint64_t produced = 0; // difference-branch results kept
  std::uint64_t salvaged = 0; // sum-branch results kept
  std::uint64_t discarded = 0;
  std::uint64_t survived = 0; // still waiting in a bucket at the end
};

struct SieveStats {
  int k = 0;
  std::uint64_t M = 0;
  int stage_width = 0;
  bool salvage = true;
  std::vector<StageStats> stages;
  std::uint64_t fresh_drawn = 0;
  std::uint64_t fresh_zero = 0;  // fresh labels with l = 0, dropped on arrival
  std::uint64_t combinations = 0;
  std::uint64_t discarded_total = 0;  // zero draws plus dropped combination results
  std::uint64_t discarded_cost = 0;
  std::uint64_t survived_total = 0;
  std::uint64_t survived_cost = 0;
  std::uint64_t final_cost = 0;
  bool success = false;
  bool lucky_draw = false;  // a fresh draw was already l = M/2
};

struct SieveOptions {
  bool salvage = true;
};

struct SieveResult {
  PhaseLabel label;
  SieveStats stats;
};

/// The fresh-label budget ran out before an l = M/2 label appeared.
class Exhausted : public Error {
 public:
  Exhausted(std::uint64_t budget, SieveStats stats)
      : Error("sieve budget of " + std::to_string(budget) + " fresh labels exhausted"),
        budget_(budget),
        stats_(std::move(stats)) {}
  std::uint64_t budget() const { return budget_; }
  const SieveStats& stats() const { return stats_; }

 private:
  std::uint64_t budget_;
  SieveStats stats_;
};

struct CombineResult {
  PhaseLabel label;
  bool difference;  // true: l1 - l2, false: l1 + l2
};

/// Produces the index-th fresh label.
using LabelSource = std::function<PhaseLabel(std::uint64_t index)>;

int log2_modulus(std::uint64_t M);
/// ceil(sqrt(k - 1)) matching bits per stage; 0 when k < 2.
int stage_width(int k);
/// Number of non-empty stages needed to clear bits 0..k-2.
int stage_count(int k);
/// 64 * 2^(ceil(sqrt k) * ceil(log2 k)).
std::uint64_t default_budget(int k);

/// Analytic shortcut for one oracle round: l uniform on Z_M.
PhaseLabel sample_label(std::uint64_t M, Rng& rng);

/// CNOT from x onto y, then measure y. Outcome 1 leaves x.l - y.l and outcome
/// 0 leaves x.l + y.l, each with probability 1/2. With qubit payloads on both
/// labels the two-qubit circuit is simulated; otherwise a fair coin decides.
CombineResult combine(const PhaseLabel& x, const PhaseLabel& y, Rng& rng);

/// Staged Kuperberg sieve over labels from `source`, until l = M/2 or
/// `budget` fresh labels have been drawn (throws Exhausted).
SieveResult run_sieve(const LabelSource& source, std::uint64_t M, std::uint64_t budget, Rng& rng,
                      const SieveOptions& options = {});

/// Hadamard then measure on |0> + e^{pi i s}|1>, i.e. s mod 2. Uses the
/// label's simulated qubit when it has one; otherwise builds the state from
/// `shift` (analytic backend, verification only).
int extract_parity(const PhaseLabel& label, std::optional<std::uint64_t> shift, Rng& rng);

std::string sieve_stats_csv(const SieveStats& stats);

}  // namespace dsieve
