#include "dsieve/recover.hpp"

#include <algorithm>

namespace dsieve {

std::string to_string(Mode mode) { return mode == Mode::single ? "single" : "distributed"; }

Mode parse_mode(const std::string& text) {
  if (text == "single") return Mode::single;
  if (text == "distributed") return Mode::distributed;
  throw InvalidParameters("unknown mode '" + text + "'");
}

namespace {

class Solver {
 public:
  Solver(const SolveConfig& config, SolveReport& report, Rng& rng)
      : config_(config), report_(report), rng_(rng) {}

  /// Recovers all bits of `instance` on one node; returns the shift.
  std::uint64_t single_node(HiddenShiftInstance instance, const std::string& stage,
                            CommLedger& ledger) {
    if (config_.backend == Backend::analytic && !instance.planted())
      throw MissingGroundTruth("the analytic backend only runs on planted instances");
    const NodeTopology topology = plan_monolithic(instance);
    std::uint64_t shift = 0;
    const int width = instance.n();
    for (int bit = 0; bit < width; ++bit) {
      const std::uint64_t M = instance.size();
      Rng bit_rng = rng_.child(stage, static_cast<std::uint64_t>(bit));
      LabelSource source = [&](std::uint64_t index) {
        Rng round = bit_rng.child("round", index);
        RoundResult detail;
        PhaseLabel label = monolithic_round(topology, instance, config_.backend, round, ledger,
                                            config_.qubit_cap, &detail);
        note_round(detail);
        return label;
      };
      Rng sieve_rng = bit_rng.child("sieve");
      SieveResult result = run_sieve(source, M, budget_for(M), sieve_rng, config_.sieve);
      Rng parity_rng = bit_rng.child("parity");
      const int parity = extract_parity(result.label, instance.hidden_a(), parity_rng);
      report_.bits.push_back(BitRecord{stage, bit, width - bit, parity, result.stats});
      shift |= static_cast<std::uint64_t>(parity) << bit;
      if (instance.n() >= 2) instance = halve_remap(instance, parity);
    }
    return shift;
  }

  std::uint64_t distributed(const HiddenShiftInstance& instance) {
    const Decomposition original = decompose(instance, config_.t);
    if (config_.backend == Backend::analytic && !instance.planted())
      throw MissingGroundTruth("the analytic backend only runs on planted instances");
    const NodeTopology topology = plan(original);

    Decomposition dec = original;
    std::uint64_t a2 = 0;
    const int suffix_bits = original.suffix_width();
    for (int bit = 0; bit < suffix_bits; ++bit) {
      const std::uint64_t M = dec.suffix_size();
      Rng bit_rng = rng_.child("suffix", static_cast<std::uint64_t>(bit));
      LabelSource source = [&](std::uint64_t index) {
        Rng round = bit_rng.child("round", index);
        RoundResult detail;
        PhaseLabel label = distributed_round(topology, dec, config_.backend, round, report_.ledger,
                                             config_.qubit_cap, &detail);
        note_round(detail);
        return label;
      };
      Rng sieve_rng = bit_rng.child("sieve");
      SieveResult result = run_sieve(source, M, budget_for(M), sieve_rng, config_.sieve);
      Rng parity_rng = bit_rng.child("parity");
      const int parity = extract_parity(result.label, dec.suffix_shift(), parity_rng);
      report_.bits.push_back(BitRecord{"suffix", bit, suffix_bits - bit, parity, result.stats});
      a2 |= static_cast<std::uint64_t>(parity) << bit;
      if (dec.suffix_width() >= 2) dec = halve_suffix_remap(dec, parity);
    }

    const HiddenShiftInstance prefix = prefix_stage_instance(original, a2);
    CommLedger prefix_ledger(instance_fingerprint(prefix), 1, false);
    const std::uint64_t a1 = single_node(prefix, "prefix", prefix_ledger);
    report_.ledger.absorb_prefix_stage(prefix_ledger);
    return (a1 << suffix_bits) | a2;
  }

 private:
  std::uint64_t budget_for(std::uint64_t M) const {
    return config_.budget ? *config_.budget : default_budget(log2_modulus(M));
  }

  void note_round(const RoundResult& detail) {
    ++report_.rounds;
    if (detail.fidelity) {
      ++report_.fidelity_checks;
      report_.min_fidelity = std::min(report_.min_fidelity.value_or(1.0), *detail.fidelity);
    }
  }

  const SolveConfig& config_;
  SolveReport& report_;
  Rng& rng_;
};

}  // namespace

SolveReport recover_shift(const HiddenShiftInstance& instance, const SolveConfig& config, Rng& rng) {
  SolveReport report;
  report.n = instance.n();
  report.mode = config.mode;
  report.backend = config.backend;
  const std::uint64_t fingerprint = instance_fingerprint(instance);
  Solver solver(config, report, rng);
  if (config.mode == Mode::single) {
    report.t = 0;
    report.ledger = CommLedger(fingerprint, 1, false);
    report.a = solver.single_node(instance, "single", report.ledger);
  } else {
    report.t = config.t;
    report.ledger = CommLedger(fingerprint, std::size_t{1} << std::clamp(config.t, 0, 20), true);
    report.a = solver.distributed(instance);
  }
  if (instance.hidden_a()) report.matches_planted = report.a == *instance.hidden_a();
  return report;
}

}  // namespace dsieve
