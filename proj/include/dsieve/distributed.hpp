#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dsieve/circuit.hpp"
#include "dsieve/instances.hpp"
#include "dsieve/phase_label.hpp"
#include "dsieve/rng.hpp"
#include "dsieve/sorting_network.hpp"

namespace dsieve {

enum class Backend { circuit, analytic };

std::string to_string(Backend backend);
Backend parse_backend(const std::string& text);

/// Declared elementary-depth cost model. Oracles and U_sort are simulated as
/// whole-register gates; these figures stand in for their decompositions.
namespace cost {
/// An m-output truth-table oracle on `input_width` bits: depth m per input bit.
inline std::uint64_t oracle_depth(int input_width, int m) {
  return static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(input_width);
}
inline std::uint64_t oracle_two_qubit_gates(int input_width, int m) { return oracle_depth(input_width, m); }
inline std::uint64_t comparator_depth(int m) { return 2 * static_cast<std::uint64_t>(m) + 1; }
inline std::uint64_t hadamard_depth() { return 1; }
inline std::uint64_t qft_depth(int width) { return width < 1 ? 0 : 2 * static_cast<std::uint64_t>(width) - 1; }
/// One teleportation event per cross-node two-qubit gate.
inline constexpr std::uint64_t kEbitsPerCrossGate = 1;
inline constexpr std::uint64_t kClassicalBitsPerCrossGate = 2;
}  // namespace cost

struct NodeManifest {
  std::uint64_t id = 0;
  bool coordinator = false;
  int input_width = 0;  // bits the node's oracle reads
  int output_qubits = 0;
  std::vector<std::string> registers;
  int qubits = 0;       // total qubits resident on the node
};

struct NodeTopology {
  int n = 0;
  int t = 0;
  int m = 0;
  std::vector<NodeManifest> nodes;
  std::uint64_t coordinator = 0;
  int total_qubits = 0;
  std::uint64_t fingerprint = 0;

  std::size_t node_count() const { return nodes.size(); }
};

/// Node w runs f_w/g_w on an (n-t)-bit input; node 0 also coordinates and
/// holds the branch, input and sorted registers.
NodeTopology plan(const Decomposition& dec);
/// One node running the whole oracle; the baseline for resource reports.
NodeTopology plan_monolithic(const HiddenShiftInstance& instance);

/// Stable hash of an instance's tables, used to match ledgers.
std::uint64_t instance_fingerprint(const HiddenShiftInstance& instance);

struct NodeCounters {
  std::uint64_t oracle_queries = 0;
  std::uint64_t local_two_qubit_gates = 0;
  std::uint64_t cross_node_gates = 0;
  std::uint64_t qubits = 0;          // peak resident qubits
  std::uint64_t round_depth = 0;     // peak depth of one round
  std::uint64_t total_depth = 0;     // summed over rounds
  std::uint64_t oracle_input_width = 0;  // peak input width seen by the node's oracle
};

/// Per-node attribution of every gate in a run. Counters only grow.
class CommLedger {
 public:
  CommLedger() = default;
  CommLedger(std::uint64_t fingerprint, std::size_t nodes, bool distributed);

  std::uint64_t fingerprint() const { return fingerprint_; }
  bool distributed() const { return distributed_; }
  const std::vector<NodeCounters>& nodes() const { return nodes_; }
  std::uint64_t rounds() const { return rounds_; }

  void log_oracle(std::size_t node, int input_width, int m);
  void log_local_gates(std::size_t node, std::uint64_t count);
  void log_cross_gate(std::size_t node);
  void observe_qubits(std::size_t node, std::uint64_t qubits);
  void finish_round(std::size_t node, std::uint64_t depth);
  void count_round() { ++rounds_; }
  /// Folds a one-node ledger (the prefix-stage solve) into a separate row so
  /// it does not blur the per-node oracle-stage figures.
  void absorb_prefix_stage(const CommLedger& stage);
  const NodeCounters& prefix_stage() const { return prefix_stage_; }

  std::uint64_t total_local_gates() const;
  std::uint64_t total_cross_gates() const;
  std::uint64_t total_oracle_queries() const;
  /// Local plus cross-node gates over all nodes and the prefix stage.
  std::uint64_t total_gates() const;
  /// Running total maintained independently of the per-node counters.
  std::uint64_t gates_logged() const { return gates_logged_; }

 private:
  NodeCounters& at(std::size_t node);

  std::uint64_t fingerprint_ = 0;
  bool distributed_ = false;
  std::vector<NodeCounters> nodes_;
  NodeCounters prefix_stage_;
  std::uint64_t rounds_ = 0;
  std::uint64_t gates_logged_ = 0;
};

/// Comparators whose two slots live on different nodes.
std::uint64_t cross_node_comparators(const ComparatorSchedule& schedule, const NodeTopology& topology);

/// One distributed pre-sieve round with ledger attribution. The circuit
/// backend runs the state-vector round; the analytic backend samples l
/// uniformly and logs the same cost-model entries.
PhaseLabel distributed_round(const NodeTopology& topology, const Decomposition& dec, Backend backend,
                             Rng& rng, CommLedger& ledger, int qubit_cap = default_qubit_cap(),
                             RoundResult* detail = nullptr);

/// Monolithic counterpart used by the single-node solver.
PhaseLabel monolithic_round(const NodeTopology& topology, const HiddenShiftInstance& instance,
                            Backend backend, Rng& rng, CommLedger& ledger,
                            int qubit_cap = default_qubit_cap(), RoundResult* detail = nullptr);

/// Cost-model depth of the oracle stage on one node.
std::uint64_t oracle_stage_depth(int n, int t, int m);

struct ResourceRow {
  std::string label;
  std::uint64_t node = 0;
  std::uint64_t qubits = 0;
  std::uint64_t round_depth = 0;
  std::uint64_t oracle_queries = 0;
  std::uint64_t oracle_input_width = 0;
  std::uint64_t cross_node_gates = 0;
};

struct ResourceReport {
  int n = 0;
  int t = 0;
  int m = 0;
  std::string network = "batcher-odd-even-mergesort";
  std::vector<ResourceRow> distributed;
  ResourceRow monolithic;
  ResourceRow prefix_stage;
  std::uint64_t distributed_oracle_width = 0;
  std::uint64_t monolithic_oracle_width = 0;
  std::uint64_t distributed_oracle_depth = 0;
  std::uint64_t monolithic_oracle_depth = 0;
  std::uint64_t cross_node_events = 0;
  std::uint64_t ebits = 0;
  std::uint64_t classical_bits = 0;
  std::uint64_t sort_layers = 0;
  std::uint64_t sort_comparators = 0;
};

/// Side-by-side distributed vs monolithic figures. Throws InvalidParameters
/// when the ledgers describe different instances and VerificationFailure if
/// the per-node oracle width is not strictly below the monolithic one.
ResourceReport resource_report(const NodeTopology& topology, const CommLedger& distributed,
                               const CommLedger& monolithic);

std::string format_resource_table(const ResourceReport& report);

}  // namespace dsieve
