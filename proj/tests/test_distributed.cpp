#include "doctest.h"

#include "dsieve/distributed.hpp"
#include "dsieve/errors.hpp"
#include "dsieve/recover.hpp"

using namespace dsieve;

TEST_CASE("topology of the experiment split") {
  const auto dec = decompose(load_table1(), 1);
  const auto topo = plan(dec);
  REQUIRE(topo.node_count() == 2);
  CHECK(topo.nodes[0].coordinator);
  CHECK_FALSE(topo.nodes[1].coordinator);
  CHECK(topo.nodes[0].input_width == 2);
  CHECK(topo.nodes[1].qubits == 4);
  CHECK(topo.nodes[0].qubits == 4 + 1 + 2 + 8);
  CHECK(topo.total_qubits == 19);
  const auto mono = plan_monolithic(load_table1());
  CHECK(mono.total_qubits == 8);
  CHECK(mono.nodes[0].input_width == 3);
}

TEST_CASE("per-node oracle width and depth shrink with t") {
  const auto inst = generate_instance(8, 9, 77, 2);
  std::uint64_t previous = oracle_stage_depth(8, 0, 9);
  for (int t = 1; t < 8; ++t) {
    const auto topo = plan(decompose(inst, t));
    for (const auto& node : topo.nodes) CHECK(node.input_width == 8 - t);
    const auto depth = oracle_stage_depth(8, t, 9);
    CHECK(depth < previous);
    previous = depth;
  }
}

TEST_CASE("one distributed round logs the expected costs") {
  const auto dec = decompose(generate_instance(5, 5, 9, 3), 2);
  const auto topo = plan(dec);
  CommLedger ledger(topo.fingerprint, 4, true);
  Rng rng(1);
  distributed_round(topo, dec, Backend::analytic, rng, ledger);
  // Independent tally: two width-3 oracle queries per node, 5 comparators.
  const std::uint64_t oracle = 5 * 3;
  for (std::size_t w = 0; w < 4; ++w) {
    CHECK(ledger.nodes()[w].oracle_queries == 2);
    CHECK(ledger.nodes()[w].oracle_input_width == 3);
    CHECK(ledger.nodes()[w].local_two_qubit_gates == 2 * oracle);
  }
  CHECK(ledger.total_cross_gates() == 5);
  // Low slots of (0,1)(2,3) (0,2)(1,3) (1,2).
  CHECK(ledger.nodes()[0].cross_node_gates == 2);
  CHECK(ledger.nodes()[1].cross_node_gates == 2);
  CHECK(ledger.nodes()[2].cross_node_gates == 1);
  CHECK(ledger.nodes()[0].round_depth == 2 * oracle + 1 + 3 * 11 + 5);
  CHECK(ledger.nodes()[3].round_depth == 2 * oracle);
  CHECK(ledger.nodes()[0].qubits == 5 + 1 + 3 + 20);
  CHECK(ledger.total_gates() == ledger.gates_logged());
  CHECK(ledger.rounds() == 1);

  CommLedger wrong(topo.fingerprint, 2, true);
  CHECK_THROWS_AS(distributed_round(topo, dec, Backend::analytic, rng, wrong), InvalidParameters);
}

TEST_CASE("circuit and analytic rounds log identical costs") {
  const auto dec = decompose(load_table1(), 1);
  const auto topo = plan(dec);
  CommLedger a(topo.fingerprint, 2, true), b(topo.fingerprint, 2, true);
  Rng rng(3);
  for (int i = 0; i < 5; ++i) {
    RoundResult detail;
    const auto label = distributed_round(topo, dec, Backend::circuit, rng, a, 26, &detail);
    CHECK(label.qubit.has_value());
    CHECK(detail.qubits == 19);
    const auto analytic = distributed_round(topo, dec, Backend::analytic, rng, b);
    CHECK_FALSE(analytic.qubit.has_value());
  }
  for (std::size_t w = 0; w < 2; ++w) {
    CHECK(a.nodes()[w].local_two_qubit_gates == b.nodes()[w].local_two_qubit_gates);
    CHECK(a.nodes()[w].cross_node_gates == b.nodes()[w].cross_node_gates);
    CHECK(a.nodes()[w].total_depth == b.nodes()[w].total_depth);
  }
}

TEST_CASE("ledger conservation over whole solves") {
  Rng rng(8);
  for (int i = 0; i < 12; ++i) {
    const int n = 4 + static_cast<int>(rng.below(6));
    const int t = 1 + static_cast<int>(rng.below(3));
    const auto inst = generate_instance(n, n + 1, rng.below(1ULL << n), rng.next());
    SolveConfig cfg;
    cfg.mode = Mode::distributed;
    cfg.t = std::min(t, n - 1);
    auto r = rng.child("solve", static_cast<std::uint64_t>(i));
    const auto report = recover_shift(inst, cfg, r);
    CHECK(report.matches_planted == std::optional<bool>(true));
    const auto& ledger = report.ledger;
    CHECK(ledger.total_gates() == ledger.gates_logged());
    std::uint64_t queries = 0;
    for (const auto& node : ledger.nodes()) {
      queries += node.oracle_queries;
      CHECK(node.oracle_input_width == static_cast<std::uint64_t>(n - cfg.t));
    }
    CHECK(queries == ledger.total_oracle_queries());
    CHECK(ledger.prefix_stage().oracle_input_width == static_cast<std::uint64_t>(cfg.t));
    CHECK(ledger.rounds() == report.rounds);
  }
}

TEST_CASE("resource report") {
  const auto inst = load_table1();
  SolveConfig dcfg;
  dcfg.mode = Mode::distributed;
  dcfg.t = 1;
  Rng r1(1), r2(2);
  const auto dist = recover_shift(inst, dcfg, r1);
  const auto mono = recover_shift(inst, SolveConfig{}, r2);
  const auto report = resource_report(plan(decompose(inst, 1)), dist.ledger, mono.ledger);
  CHECK(report.distributed_oracle_width == 2);
  CHECK(report.monolithic_oracle_width == 3);
  CHECK(report.distributed_oracle_depth < report.monolithic_oracle_depth);
  CHECK(report.sort_layers == 1);
  CHECK(report.sort_comparators == 1);
  CHECK(report.ebits == report.cross_node_events);
  CHECK(report.classical_bits == 2 * report.cross_node_events);
  CHECK(report.distributed.size() == 2);
  const auto table = format_resource_table(report);
  CHECK(table.find("batcher-odd-even-mergesort") != std::string::npos);
  CHECK(table.find("monolithic") != std::string::npos);

  Rng r3(3);
  const auto other = recover_shift(generate_instance(3, 4, 7, 5), SolveConfig{}, r3);
  CHECK_THROWS_AS(resource_report(plan(decompose(inst, 1)), dist.ledger, other.ledger), InvalidParameters);
  CHECK_THROWS_AS(resource_report(plan(decompose(inst, 1)), mono.ledger, mono.ledger), InvalidParameters);
}

TEST_CASE("backend names") {
  CHECK(parse_backend("circuit") == Backend::circuit);
  CHECK(to_string(Backend::analytic) == "analytic");
  CHECK_THROWS_AS(parse_backend("gpu"), InvalidParameters);
}
