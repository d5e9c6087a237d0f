#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsieve/instances.hpp"
#include "dsieve/phase_label.hpp"
#include "dsieve/rng.hpp"
#include "dsieve/sorting_network.hpp"
#include "dsieve/statevector.hpp"

namespace dsieve {

inline constexpr int kDefaultQubitCap = 26;

/// DSIEVE_QUBIT_CAP if set to a positive integer, otherwise 26.
int default_qubit_cap();

/// Outcome of one pre-sieve circuit round.
struct RoundResult {
  PhaseLabel label;
  std::vector<MeasurementRecord> measurements;
  int qubits = 0;
  /// Value the input register collapsed to on branch 0 (u0 or x0).
  std::uint64_t collapsed_input = 0;
  /// Residual branch-qubit fidelity against |0> + e^{2 pi i l s/M}|1>;
  /// present only when the planted shift is known.
  std::optional<double> fidelity;
};

// Register names used by both round layouts.
inline const std::string kBranch = "branch";
inline const std::string kInput = "input";
inline const std::string kOutput = "output";
inline const std::string kSorted = "sorted";
std::string node_register(std::uint64_t w);

/// branch:1, input:n, output:m
RegisterLayout single_node_layout(const HiddenShiftInstance& instance);
/// branch:1, input:n-t, node0..node(2^t-1):m each, sorted:2^t*m
RegisterLayout distributed_layout(const Decomposition& dec);

/// Monolithic round: H on branch+input, oracle, measure output, QFT on
/// input, measure input. Returns l modulo 2^n.
RoundResult run_label_round(const HiddenShiftInstance& instance, Rng& rng,
                            int qubit_cap = default_qubit_cap());

/// Distributed round: H, per-node oracles, U_sort via `schedule`, measure the
/// sorted register, uncompute the node outputs with a second oracle query,
/// QFT and measure the input. Returns l modulo 2^(n-t).
RoundResult run_label_round(const Decomposition& dec, const ComparatorSchedule& schedule, Rng& rng,
                            int qubit_cap = default_qubit_cap());

/// |0> + e^{2 pi i l s / M}|1>, normalized.
QubitState phase_state(std::uint64_t l, std::uint64_t s, std::uint64_t M);

}  // namespace dsieve
