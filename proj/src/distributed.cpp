#include "dsieve/distributed.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "dsieve/sieve.hpp"

namespace dsieve {

std::string to_string(Backend backend) {
  return backend == Backend::circuit ? "circuit" : "analytic";
}

Backend parse_backend(const std::string& text) {
  if (text == "circuit") return Backend::circuit;
  if (text == "analytic") return Backend::analytic;
  throw InvalidParameters("unknown backend '" + text + "'");
}

std::uint64_t instance_fingerprint(const HiddenShiftInstance& instance) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(instance.n()) * 131 +
                          static_cast<std::uint64_t>(instance.m()));
  for (std::uint64_t v : instance.f_table()) h = mix64(h ^ v);
  for (std::uint64_t v : instance.g_table()) h = mix64(h ^ (v + 0x5851F42D4C957F2DULL));
  return h;
}

NodeTopology plan(const Decomposition& dec) {
  NodeTopology topo;
  topo.n = dec.n();
  topo.t = dec.t();
  topo.m = dec.m();
  topo.coordinator = 0;
  topo.fingerprint = instance_fingerprint(dec.instance());
  for (std::uint64_t w = 0; w < dec.node_count(); ++w) {
    NodeManifest node;
    node.id = w;
    node.coordinator = w == topo.coordinator;
    node.input_width = dec.suffix_width();
    node.output_qubits = dec.m();
    node.registers.push_back(node_register(w));
    node.qubits = dec.m();
    if (node.coordinator) {
      node.registers.insert(node.registers.begin(), {kBranch, kInput});
      node.registers.push_back(kSorted);
      node.qubits += 1 + dec.suffix_width() + static_cast<int>(dec.node_count()) * dec.m();
    }
    topo.total_qubits += node.qubits;
    topo.nodes.push_back(std::move(node));
  }
  return topo;
}

NodeTopology plan_monolithic(const HiddenShiftInstance& instance) {
  NodeTopology topo;
  topo.n = instance.n();
  topo.t = 0;
  topo.m = instance.m();
  topo.fingerprint = instance_fingerprint(instance);
  NodeManifest node;
  node.coordinator = true;
  node.input_width = instance.n();
  node.output_qubits = instance.m();
  node.registers = {kBranch, kInput, kOutput};
  node.qubits = 1 + instance.n() + instance.m();
  topo.total_qubits = node.qubits;
  topo.nodes.push_back(std::move(node));
  return topo;
}

CommLedger::CommLedger(std::uint64_t fingerprint, std::size_t nodes, bool distributed)
    : fingerprint_(fingerprint), distributed_(distributed), nodes_(nodes) {}

NodeCounters& CommLedger::at(std::size_t node) {
  if (node >= nodes_.size()) throw InvalidParameters("ledger has no node " + std::to_string(node));
  return nodes_[node];
}

void CommLedger::log_oracle(std::size_t node, int input_width, int m) {
  auto& c = at(node);
  ++c.oracle_queries;
  const auto gates = cost::oracle_two_qubit_gates(input_width, m);
  c.local_two_qubit_gates += gates;
  gates_logged_ += gates;
  c.oracle_input_width = std::max(c.oracle_input_width, static_cast<std::uint64_t>(input_width));
}

void CommLedger::log_local_gates(std::size_t node, std::uint64_t count) {
  at(node).local_two_qubit_gates += count;
  gates_logged_ += count;
}

void CommLedger::log_cross_gate(std::size_t node) {
  ++at(node).cross_node_gates;
  ++gates_logged_;
}

void CommLedger::observe_qubits(std::size_t node, std::uint64_t qubits) {
  auto& c = at(node);
  c.qubits = std::max(c.qubits, qubits);
}

void CommLedger::finish_round(std::size_t node, std::uint64_t depth) {
  auto& c = at(node);
  c.round_depth = std::max(c.round_depth, depth);
  c.total_depth += depth;
}

std::uint64_t CommLedger::total_local_gates() const {
  std::uint64_t total = 0;
  for (const auto& c : nodes_) total += c.local_two_qubit_gates;
  return total;
}

std::uint64_t CommLedger::total_cross_gates() const {
  std::uint64_t total = 0;
  for (const auto& c : nodes_) total += c.cross_node_gates;
  return total;
}

void CommLedger::absorb_prefix_stage(const CommLedger& stage) {
  for (const auto& c : stage.nodes()) {
    prefix_stage_.oracle_queries += c.oracle_queries;
    prefix_stage_.local_two_qubit_gates += c.local_two_qubit_gates;
    prefix_stage_.cross_node_gates += c.cross_node_gates;
    prefix_stage_.qubits = std::max(prefix_stage_.qubits, c.qubits);
    prefix_stage_.round_depth = std::max(prefix_stage_.round_depth, c.round_depth);
    prefix_stage_.total_depth += c.total_depth;
    prefix_stage_.oracle_input_width = std::max(prefix_stage_.oracle_input_width, c.oracle_input_width);
  }
  rounds_ += stage.rounds();
  gates_logged_ += stage.gates_logged();
}

std::uint64_t CommLedger::total_gates() const {
  std::uint64_t total = prefix_stage_.local_two_qubit_gates + prefix_stage_.cross_node_gates;
  for (const auto& c : nodes_) total += c.local_two_qubit_gates + c.cross_node_gates;
  return total;
}

std::uint64_t CommLedger::total_oracle_queries() const {
  std::uint64_t total = 0;
  for (const auto& c : nodes_) total += c.oracle_queries;
  return total;
}

std::uint64_t cross_node_comparators(const ComparatorSchedule& schedule, const NodeTopology& topology) {
  // Slot i of the network is node i's output register.
  std::uint64_t crossing = 0;
  for (const auto& layer : schedule.layers()) {
    for (const auto& c : layer) {
      if (topology.nodes.at(c.low).id != topology.nodes.at(c.high).id) ++crossing;
    }
  }
  return crossing;
}

PhaseLabel distributed_round(const NodeTopology& topology, const Decomposition& dec, Backend backend,
                             Rng& rng, CommLedger& ledger, int qubit_cap, RoundResult* detail) {
  if (topology.node_count() != dec.node_count() || ledger.nodes().size() != dec.node_count())
    throw InvalidParameters("topology, ledger and decomposition disagree on node count");
  const ComparatorSchedule schedule = build_comparator_schedule(dec.node_count(), dec.m());
  const int k = dec.suffix_width();
  const int m = dec.m();

  PhaseLabel label;
  if (backend == Backend::circuit) {
    RoundResult result = run_label_round(dec, schedule, rng, qubit_cap);
    label = result.label;
    if (detail) *detail = std::move(result);
  } else {
    label = sample_label(dec.suffix_size(), rng);
  }

  const std::size_t coord = static_cast<std::size_t>(topology.coordinator);
  for (std::size_t w = 0; w < dec.node_count(); ++w) {
    // Compute and uncompute queries.
    ledger.log_oracle(w, k, m);
    ledger.log_oracle(w, k, m);
    std::uint64_t qubits = static_cast<std::uint64_t>(m);
    if (w == coord) qubits += 1 + static_cast<std::uint64_t>(k) + dec.node_count() * static_cast<std::uint64_t>(m);
    ledger.observe_qubits(w, qubits);
  }
  for (const auto& layer : schedule.layers()) {
    for (const auto& c : layer) {
      if (topology.nodes.at(c.low).id != topology.nodes.at(c.high).id)
        ledger.log_cross_gate(c.low);
      else
        ledger.log_local_gates(coord, cost::comparator_depth(m));
    }
  }
  const std::uint64_t oracle = cost::oracle_depth(k, m);
  for (std::size_t w = 0; w < dec.node_count(); ++w) {
    std::uint64_t depth = 2 * oracle;
    if (w == coord) {
      depth += cost::hadamard_depth() + schedule.depth() * cost::comparator_depth(m) + cost::qft_depth(k);
    }
    ledger.finish_round(w, depth);
  }
  ledger.count_round();
  return label;
}

PhaseLabel monolithic_round(const NodeTopology& topology, const HiddenShiftInstance& instance,
                            Backend backend, Rng& rng, CommLedger& ledger, int qubit_cap,
                            RoundResult* detail) {
  if (topology.node_count() != 1 || ledger.nodes().size() != 1)
    throw InvalidParameters("monolithic rounds run on exactly one node");
  PhaseLabel label;
  if (backend == Backend::circuit) {
    RoundResult result = run_label_round(instance, rng, qubit_cap);
    label = result.label;
    if (detail) *detail = std::move(result);
  } else {
    label = sample_label(instance.size(), rng);
  }
  ledger.log_oracle(0, instance.n(), instance.m());
  ledger.observe_qubits(0, 1 + static_cast<std::uint64_t>(instance.n()) + static_cast<std::uint64_t>(instance.m()));
  ledger.finish_round(0, cost::hadamard_depth() + cost::oracle_depth(instance.n(), instance.m()) +
                             cost::qft_depth(instance.n()));
  ledger.count_round();
  return label;
}

std::uint64_t oracle_stage_depth(int n, int t, int m) { return cost::oracle_depth(n - t, m); }

namespace {

ResourceRow row_of(const std::string& label, std::uint64_t node, const NodeCounters& c) {
  return ResourceRow{label, node, c.qubits, c.round_depth, c.oracle_queries, c.oracle_input_width,
                     c.cross_node_gates};
}

}  // namespace

ResourceReport resource_report(const NodeTopology& topology, const CommLedger& distributed,
                               const CommLedger& monolithic) {
  if (distributed.fingerprint() != monolithic.fingerprint() || distributed.fingerprint() != topology.fingerprint)
    throw InvalidParameters("resource report needs both runs on the same instance");
  if (!distributed.distributed() || monolithic.distributed() || monolithic.nodes().size() != 1)
    throw InvalidParameters("expected one distributed and one monolithic ledger");

  ResourceReport report;
  report.n = topology.n;
  report.t = topology.t;
  report.m = topology.m;
  for (std::size_t w = 0; w < distributed.nodes().size(); ++w) {
    const auto& c = distributed.nodes()[w];
    report.distributed.push_back(row_of(w == topology.coordinator ? "node*" : "node", w, c));
    report.distributed_oracle_width = std::max(report.distributed_oracle_width, c.oracle_input_width);
    report.cross_node_events += c.cross_node_gates;
  }
  report.monolithic = row_of("monolithic", 0, monolithic.nodes().front());
  report.prefix_stage = row_of("prefix", topology.coordinator, distributed.prefix_stage());
  report.monolithic_oracle_width = monolithic.nodes().front().oracle_input_width;
  report.distributed_oracle_depth =
      cost::oracle_depth(static_cast<int>(report.distributed_oracle_width), topology.m);
  report.monolithic_oracle_depth =
      cost::oracle_depth(static_cast<int>(report.monolithic_oracle_width), topology.m);
  report.ebits = report.cross_node_events * cost::kEbitsPerCrossGate;
  report.classical_bits = report.cross_node_events * cost::kClassicalBitsPerCrossGate;
  const auto schedule = build_comparator_schedule(topology.node_count(), topology.m);
  report.sort_layers = schedule.depth();
  report.sort_comparators = schedule.comparator_count();

  if (report.distributed_oracle_width >= report.monolithic_oracle_width)
    throw VerificationFailure("per-node oracle width is not below the monolithic width");
  return report;
}

std::string format_resource_table(const ResourceReport& r) {
  std::ostringstream os;
  os << "instance n=" << r.n << " m=" << r.m << " t=" << r.t << "  sorting network: " << r.network
     << " (" << r.sort_layers << " layers, " << r.sort_comparators << " comparators)\n";
  os << std::left << std::setw(12) << "run" << std::right << std::setw(6) << "node" << std::setw(8)
     << "qubits" << std::setw(10) << "depth" << std::setw(9) << "queries" << std::setw(8) << "in-bits"
     << std::setw(8) << "cross" << '\n';
  auto line = [&os](const ResourceRow& row) {
    os << std::left << std::setw(12) << row.label << std::right << std::setw(6) << row.node
       << std::setw(8) << row.qubits << std::setw(10) << row.round_depth << std::setw(9)
       << row.oracle_queries << std::setw(8) << row.oracle_input_width << std::setw(8)
       << row.cross_node_gates << '\n';
  };
  for (const auto& row : r.distributed) line(row);
  if (r.prefix_stage.oracle_queries > 0) line(r.prefix_stage);
  line(r.monolithic);
  os << "oracle-stage depth: distributed " << r.distributed_oracle_depth << " vs monolithic "
     << r.monolithic_oracle_depth << "; cross-node events " << r.cross_node_events << " (" << r.ebits
     << " ebits, " << r.classical_bits << " classical bits)\n";
  return os.str();
}

}  // namespace dsieve
