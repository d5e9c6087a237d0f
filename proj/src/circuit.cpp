#include "dsieve/circuit.hpp"

#include <cstdlib>
#include <numbers>

namespace dsieve {

int default_qubit_cap() {
  if (const char* env = std::getenv("DSIEVE_QUBIT_CAP")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0 && value <= 40) return static_cast<int>(value);
  }
  return kDefaultQubitCap;
}

std::string node_register(std::uint64_t w) { return "node" + std::to_string(w); }

RegisterLayout single_node_layout(const HiddenShiftInstance& instance) {
  RegisterLayout layout;
  layout.add(kBranch, 1).add(kInput, instance.n()).add(kOutput, instance.m());
  return layout;
}

RegisterLayout distributed_layout(const Decomposition& dec) {
  RegisterLayout layout;
  layout.add(kBranch, 1).add(kInput, dec.suffix_width());
  for (std::uint64_t w = 0; w < dec.node_count(); ++w) layout.add(node_register(w), dec.m());
  layout.add(kSorted, static_cast<int>(dec.node_count()) * dec.m());
  return layout;
}

QubitState phase_state(std::uint64_t l, std::uint64_t s, std::uint64_t M) {
  const double turn = static_cast<double>((l * s) & (M - 1)) / static_cast<double>(M);
  const double amp = 1.0 / std::numbers::sqrt2;
  return {std::complex<double>(amp, 0.0), std::polar(amp, 2.0 * std::numbers::pi * turn)};
}

namespace {

void check_cap(const RegisterLayout& layout, int cap) {
  if (layout.qubits() > cap) throw BackendTooLarge(layout.qubits(), cap);
}

/// After the input register is measured every register except the branch is
/// a basis value; read off the branch qubit's two amplitudes.
QubitState residual_branch(const StateVector<double>& state) {
  const Register& b = state.reg(kBranch);
  QubitState q{};
  double total = 0.0;
  state.for_each_nonzero([&](std::uint64_t i, const std::complex<double>& a) {
    q[b.value(i)] += a;
    total += std::norm(a);
  });
  const double scale = 1.0 / std::sqrt(total);
  q[0] *= scale;
  q[1] *= scale;
  return q;
}

std::uint64_t branch_zero_input(const StateVector<double>& state) {
  const Register& b = state.reg(kBranch);
  const Register& x = state.reg(kInput);
  std::optional<std::uint64_t> input;
  state.for_each_nonzero([&](std::uint64_t i, const std::complex<double>&) {
    if (!input && b.value(i) == 0) input = x.value(i);
  });
  if (!input) throw VerificationFailure("branch 0 has no amplitude after collapse");
  return *input;
}

double branch_fidelity(const QubitState& actual, const QubitState& expected) {
  Eigen::Vector2cd a(actual[0], actual[1]);
  Eigen::Vector2cd e(expected[0], expected[1]);
  return fidelity(e, a);
}

void finish_round(StateVector<double>& state, RoundResult& result, std::uint64_t modulus,
                  std::optional<std::uint64_t> shift, Rng& rng) {
  apply_qft(state, kInput);
  Rng site = rng.child("measure", 2);
  const auto record = measure(state, kInput, site);
  result.measurements.push_back(record);
  result.label = PhaseLabel{record.value, modulus, 1, residual_branch(state)};
  if (shift) result.fidelity = branch_fidelity(*result.label.qubit, phase_state(record.value, *shift, modulus));
}

}  // namespace

RoundResult run_label_round(const HiddenShiftInstance& instance, Rng& rng, int qubit_cap) {
  const RegisterLayout layout = single_node_layout(instance);
  check_cap(layout, qubit_cap);
  StateVector<double> state(layout);
  RoundResult result;
  result.qubits = layout.qubits();

  apply_hadamard(state, kBranch);
  apply_hadamard(state, kInput);
  const std::string targets[] = {kOutput};
  apply_oracle(state, kBranch, kInput, targets, instance);

  Rng site = rng.child("measure", 0);
  result.measurements.push_back(measure(state, kOutput, site));

  result.collapsed_input = branch_zero_input(state);
  finish_round(state, result, instance.size(), instance.hidden_a(), rng);
  return result;
}

RoundResult run_label_round(const Decomposition& dec, const ComparatorSchedule& schedule, Rng& rng,
                            int qubit_cap) {
  const RegisterLayout layout = distributed_layout(dec);
  check_cap(layout, qubit_cap);
  StateVector<double> state(layout);
  RoundResult result;
  result.qubits = layout.qubits();

  std::vector<std::string> nodes;
  for (std::uint64_t w = 0; w < dec.node_count(); ++w) nodes.push_back(node_register(w));
  const OracleTables tables = oracle_tables(dec);

  apply_hadamard(state, kBranch);
  apply_hadamard(state, kInput);
  apply_oracle(state, kBranch, kInput, nodes, tables);
  apply_usort(state, nodes, kSorted, schedule);

  Rng site = rng.child("measure", 1);
  result.measurements.push_back(measure(state, kSorted, site));

  // Second query backs the node outputs out to |0>.
  apply_oracle(state, kBranch, kInput, nodes, tables);
  for (const auto& name : nodes) {
    const auto support = register_support(state, name);
    if (support.size() != 1 || support.front() != 0)
      throw VerificationFailure("node register " + name + " not uncomputed to |0>");
  }

  result.collapsed_input = branch_zero_input(state);
  finish_round(state, result, dec.suffix_size(), dec.suffix_shift(), rng);
  return result;
}

}  // namespace dsieve
