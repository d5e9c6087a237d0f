// dsieve: batch front end for instance generation, solving and verification.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "dsieve/circuit.hpp"
#include "dsieve/distributed.hpp"
#include "dsieve/errors.hpp"
#include "dsieve/instances.hpp"
#include "dsieve/io.hpp"
#include "dsieve/recover.hpp"
#include "dsieve/sieve.hpp"
#include "dsieve/sorting_network.hpp"
#include "dsieve/statevector.hpp"
#include "dsieve/verify.hpp"

namespace {

using namespace dsieve;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitVerification = 3;
constexpr int kExitBudget = 4;

struct Seed {
  std::uint64_t value = 0;
  bool automatic = false;
};

Seed resolve_seed(const std::optional<std::uint64_t>& given) {
  if (given) return {*given, false};
  std::random_device device;
  const std::uint64_t value = (static_cast<std::uint64_t>(device()) << 32) ^ device();
  std::cerr << "no --seed given; using auto-generated seed " << value << "\n";
  return {value, true};
}

Json header(const std::string& command, const Seed& seed) {
  return {{"tool", "dsieve"},
          {"command", command},
          {"seed", seed.value},
          {"seed_source", seed.automatic ? "auto" : "explicit"}};
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_atomic(path, text);
  }
}

// Runs body(i) for i in [0, count) on `jobs` threads. Each index owns its
// output slot, so results do not depend on the thread count.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body) {
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  bool table1 = false;
  int n = 0;
  std::optional<int> m;
  std::optional<std::uint64_t> a;
  std::optional<std::uint64_t> seed;
  bool blind = false;
  bool show = false;
  std::string output;
};

int cmd_gen(const GenArgs& args) {
  HiddenShiftInstance inst = load_table1();
  Json doc;
  if (args.table1) {
    doc = instance_to_json(inst);
  } else {
    if (args.n < 1) throw InvalidParameters("gen needs -n or --table1");
    const Seed seed = resolve_seed(args.seed);
    const int m = args.m.value_or(args.n);
    if (args.n > kMaxDomainBits) throw InvalidParameters("n must be in [1, 24]");
    Rng rng(seed.value);
    const std::uint64_t a = args.a ? *args.a : rng.child("shift").below(std::uint64_t{1} << args.n);
    inst = generate_instance(args.n, m, a, seed.value);
    doc = instance_to_json(inst);
    doc["seed"] = seed.value;
    doc["seed_source"] = seed.automatic ? "auto" : "explicit";
  }
  if (args.blind) doc.erase("a");
  emit(args.output, doc.dump(2) + "\n");
  if (args.show) std::cerr << format_truth_table(inst);
  return kExitOk;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string instance;
  std::string mode = "single";
  int t = 1;
  std::string backend = "analytic";
  std::optional<std::uint64_t> budget;
  std::optional<std::uint64_t> seed;
  std::uint64_t runs = 1;
  unsigned jobs = 1;
  bool no_salvage = false;
  bool resources = false;
  std::string output;
};

struct RunOutcome {
  std::optional<SolveReport> report;
  std::optional<Json> exhausted;
};

int cmd_solve(const SolveArgs& args) {
  const auto inst = read_instance(args.instance);
  SolveConfig cfg;
  cfg.mode = parse_mode(args.mode);
  cfg.t = args.t;
  cfg.backend = parse_backend(args.backend);
  cfg.budget = args.budget;
  cfg.sieve.salvage = !args.no_salvage;
  if (cfg.mode == Mode::distributed && (cfg.t < 1 || cfg.t >= inst.n()))
    throw InvalidParameters("distributed mode needs 1 <= t < n");
  if (args.runs < 1) throw InvalidParameters("--runs must be >= 1");
  const Seed seed = resolve_seed(args.seed);
  const Rng root(seed.value);

  std::vector<RunOutcome> outcomes(args.runs);
  parallel_for(args.runs, args.jobs, [&](std::size_t i) {
    Rng rng = root.child("run", i);
    try {
      outcomes[i].report = recover_shift(inst, cfg, rng);
    } catch (const Exhausted& e) {
      outcomes[i].exhausted = Json{{"budget", e.budget()}, {"stats", to_json(e.stats())}};
    }
  });

  // Human-readable lines go to stderr when stdout carries the JSON report.
  std::ostream& say = args.output.empty() || args.output == "-" ? std::cerr : std::cout;
  Json doc;
  doc["header"] = header("solve", seed);
  doc["config"] = {{"instance", std::filesystem::path(args.instance).filename().string()},
                   {"mode", to_string(cfg.mode)},
                   {"t", cfg.mode == Mode::single ? 0 : cfg.t},
                   {"backend", to_string(cfg.backend)},
                   {"budget", args.budget ? Json(*args.budget) : Json("default")},
                   {"salvage", cfg.sieve.salvage},
                   {"runs", args.runs}};
  Json runs = Json::array();
  std::uint64_t matched = 0, mismatched = 0, exhausted = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    if (o.exhausted) {
      ++exhausted;
      runs.push_back({{"run", i}, {"exhausted", *o.exhausted}});
      say << "run " << i << ": budget exhausted after " << o.exhausted->at("budget") << " fresh labels\n";
      continue;
    }
    const auto& r = *o.report;
    Json entry{{"run", i}};
    entry.update(to_json(r));
    runs.push_back(std::move(entry));
    say << "run " << i << ": a = " << r.a;
    if (r.matches_planted) {
      say << (*r.matches_planted ? " (matches planted)" : " (DOES NOT match planted)");
      (*r.matches_planted ? matched : mismatched) += 1;
    } else {
      say << " (blind)";
    }
    say << ", " << r.rounds << " oracle rounds\n";
  }
  doc["runs"] = std::move(runs);
  doc["summary"] = {{"runs", args.runs}, {"matched", matched}, {"mismatched", mismatched}, {"exhausted", exhausted}};

  if (args.resources && cfg.mode == Mode::distributed && outcomes.front().report) {
    // Monolithic baseline on the same instance for the side-by-side table.
    SolveConfig mono_cfg = cfg;
    mono_cfg.mode = Mode::single;
    Rng mono_rng = root.child("monolithic-baseline");
    const auto mono = recover_shift(inst, mono_cfg, mono_rng);
    const auto topo = plan(decompose(inst, cfg.t));
    const auto report = resource_report(topo, outcomes.front().report->ledger, mono.ledger);
    doc["resources"] = to_json(report);
    say << format_resource_table(report);
  }

  emit(args.output, doc.dump(2) + "\n");
  if (exhausted > 0) return kExitBudget;
  if (mismatched > 0) return kExitVerification;
  return kExitOk;
}

// ---------------------------------------------------------------- hist

struct HistArgs {
  std::string instance;
  int t = 1;
  std::uint64_t shots = 2048;
  std::string backend = "circuit";
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::string prefix = "hist";
};

int cmd_hist(const HistArgs& args) {
  const auto inst = read_instance(args.instance);
  if (args.t < 1 || args.t >= inst.n()) throw InvalidParameters("hist needs 1 <= t < n");
  if (args.shots < 1) throw InvalidParameters("--shots must be >= 1");
  const Backend backend = parse_backend(args.backend);
  const Seed seed = resolve_seed(args.seed);
  const Rng root(seed.value);
  const auto dec = decompose(inst, args.t);
  const auto schedule = build_comparator_schedule(dec.node_count(), dec.m());
  const int cap = default_qubit_cap();
  if (backend == Backend::circuit) {
    const int need = std::max(single_node_layout(inst).qubits(), distributed_layout(dec).qubits());
    if (need > cap) throw BackendTooLarge(need, cap);
  }

  struct Series {
    std::string mode;
    std::uint64_t M;
    std::vector<std::uint64_t> labels;
  };
  std::vector<Series> series{{"single", inst.size(), {}}, {"distributed", dec.suffix_size(), {}}};
  for (auto& s : series) {
    s.labels.resize(args.shots);
    const bool distributed = s.mode == "distributed";
    parallel_for(args.shots, args.jobs, [&](std::size_t i) {
      Rng rng = root.child(s.mode, i);
      if (backend == Backend::analytic) {
        s.labels[i] = sample_label(s.M, rng).l;
      } else if (distributed) {
        s.labels[i] = run_label_round(dec, schedule, rng, cap).label.l;
      } else {
        s.labels[i] = run_label_round(inst, rng, cap).label.l;
      }
    });
  }

  Json summary;
  summary["header"] = header("hist", seed);
  summary["config"] = {{"instance", std::filesystem::path(args.instance).filename().string()},
                       {"t", args.t},
                       {"shots", args.shots},
                       {"backend", to_string(backend)}};
  Json modes = Json::array();
  for (const auto& s : series) {
    std::vector<std::uint64_t> counts(s.M, 0);
    for (auto l : s.labels) ++counts[l];
    std::ostringstream csv;
    csv << "outcome,count\n";
    for (std::uint64_t l = 0; l < s.M; ++l) csv << l << ',' << counts[l] << '\n';
    const std::string path = args.prefix + "_" + s.mode + ".csv";
    write_atomic(path, csv.str());

    const double p = 1.0 / static_cast<double>(s.M);
    const double shots = static_cast<double>(args.shots);
    const std::uint64_t useful = counts[s.M / 2];
    const double sigma = std::sqrt(shots * p * (1 - p));
    const bool within = std::abs(static_cast<double>(useful) - shots * p) <= 3 * sigma;
    modes.push_back({{"mode", s.mode},
                     {"M", s.M},
                     {"csv", std::filesystem::path(path).filename().string()},
                     {"useful_label", s.M / 2},
                     {"useful_count", useful},
                     {"useful_frequency", static_cast<double>(useful) / shots},
                     {"expected_frequency", p},
                     {"sigma_count", sigma},
                     {"within_3_sigma", within}});
    std::cout << s.mode << ": M=" << s.M << " useful l=" << s.M / 2 << " " << useful << "/" << args.shots
              << " = " << static_cast<double>(useful) / shots << " (expected " << p << ")\n";
  }
  summary["modes"] = std::move(modes);
  write_atomic(args.prefix + "_summary.json", summary.dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------- check

struct CheckArgs {
  std::string instance;
  int t = 1;
  std::string output;
};

// U_sort schedule vs direct sort on the node-output tuples the instance can
// produce, and on every tuple when the node registers are small enough. Past
// 62 qubits the basis index no longer fits a word, so tuples are compared.
Json usort_check(const Decomposition& dec) {
  const std::size_t count = dec.node_count();
  const int m = dec.m();
  const int node_bits = m * static_cast<int>(count);
  const auto schedule = build_comparator_schedule(count, m);
  std::uint64_t compared = 0;
  std::optional<std::uint64_t> mismatch;
  std::string coverage;

  if (2 * node_bits <= 62) {
    RegisterLayout layout;
    std::vector<std::string> names;
    for (std::size_t w = 0; w < count; ++w) {
      names.push_back(node_register(w));
      layout.add(names.back(), m);
    }
    layout.add(kSorted, node_bits);
    auto net = usort_index_map(layout, names, kSorted, schedule);
    auto direct = usort_direct_index_map(layout, names, kSorted);
    auto compare = [&](std::uint64_t index) {
      ++compared;
      if (!mismatch && net(index) != direct(index)) mismatch = index;
    };
    if (node_bits <= 20) {
      coverage = "all node-register values";
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << node_bits); ++v) compare(v << node_bits);
    } else {
      coverage = "instance node-output tuples";
      for (std::uint64_t u = 0; u < dec.suffix_size(); ++u) {
        std::uint64_t fi = 0, gi = 0;
        for (std::size_t w = 0; w < count; ++w) {
          fi = (fi << m) | dec.f_w(w, u);
          gi = (gi << m) | dec.g_w(w, u);
        }
        compare(fi << node_bits);
        compare(gi << node_bits);
      }
    }
  } else {
    coverage = "instance node-output tuples (value level)";
    std::vector<std::uint64_t> a(count), b(count);
    for (std::uint64_t u = 0; u < dec.suffix_size() && !mismatch; ++u) {
      for (int branch = 0; branch < 2; ++branch) {
        for (std::size_t w = 0; w < count; ++w) a[w] = branch ? dec.g_w(w, u) : dec.f_w(w, u);
        b = a;
        schedule.apply(std::span<std::uint64_t>(a));
        std::ranges::sort(b);
        ++compared;
        if (a != b) mismatch = u;
      }
    }
  }
  Json out{{"name", "usort_equivalence"},
           {"pass", !mismatch},
           {"network", "batcher-odd-even-mergesort"},
           {"layers", schedule.depth()},
           {"comparators", schedule.comparator_count()},
           {"coverage", coverage},
           {"states_compared", compared}};
  if (mismatch) out["first_mismatch"] = *mismatch;
  return out;
}

int cmd_check(const CheckArgs& args) {
  const auto loaded = read_instance(args.instance);
  if (args.t < 1 || args.t >= loaded.n())
    throw InvalidParameters("check needs 1 <= t < n (got t=" + std::to_string(args.t) +
                            ", n=" + std::to_string(loaded.n()) + ")");
  Json checks = Json::array();
  bool ok = true;
  auto record = [&](Json entry) {
    const bool pass = entry.at("pass").get<bool>();
    ok = ok && pass;
    std::cout << (pass ? "PASS " : "FAIL ") << entry.at("name").get<std::string>();
    if (entry.contains("detail")) std::cout << ": " << entry.at("detail").get<std::string>();
    std::cout << "\n";
    checks.push_back(std::move(entry));
  };

  auto injective = [](std::span<const std::uint64_t> table) {
    std::vector<std::uint64_t> sorted(table.begin(), table.end());
    std::ranges::sort(sorted);
    return std::ranges::adjacent_find(sorted) == sorted.end();
  };
  record({{"name", "f_injective"}, {"pass", injective(loaded.f_table())}});
  record({{"name", "g_injective"}, {"pass", injective(loaded.g_table())}});

  // Shift relation: planted a if present, otherwise the brute-force shift.
  std::optional<std::uint64_t> a = loaded.hidden_a();
  if (a) {
    const auto violation = loaded.first_shift_violation();
    Json entry{{"name", "shift_relation"}, {"pass", !violation}, {"a", *a}};
    if (violation) {
      entry["detail"] = "f(x) != g(x + a) at x = " + std::to_string(*violation);
      entry["x"] = *violation;
    }
    record(std::move(entry));
  } else {
    std::optional<std::uint64_t> found;
    std::string detail;
    try {
      found = brute_force_shift(loaded);
      if (!found) detail = "no shift a satisfies f(x) = g(x + a)";
    } catch (const VerificationFailure& e) {
      detail = e.what();
    }
    Json entry{{"name", "shift_relation"}, {"pass", found.has_value()}};
    if (found) entry["a"] = *found;
    if (!detail.empty()) entry["detail"] = detail;
    record(std::move(entry));
    a = found;
  }

  const HiddenShiftInstance inst(loaded.n(), loaded.m(), {loaded.f_table().begin(), loaded.f_table().end()},
                                 {loaded.g_table().begin(), loaded.g_table().end()}, a);
  const auto dec = decompose(inst, args.t);
  if (a) {
    const auto report = check_theorem1(dec);
    Json entry{{"name", "theorem1"}};
    entry.update(to_json(report));
    if (report.counterexample) {
      const auto& c = *report.counterexample;
      const auto table = sorted_strings(dec);
      entry["detail"] = "u=" + std::to_string(c.u) + " v=" + std::to_string(c.v) + " F(u)=" + table.F_bits(c.u) +
                        " G(v)=" + table.G_bits(c.v) + (c.strings_equal ? " equal" : " differ") +
                        ", shift predicts " + (c.shift_predicts ? "equal" : "different");
    } else {
      entry["detail"] = std::to_string(report.pairs_checked) + " suffix pairs, a2=" + std::to_string(report.suffix_shift);
    }
    record(std::move(entry));
  } else {
    record({{"name", "theorem1"}, {"pass", false}, {"detail", "skipped: no hidden shift to check against"}});
  }
  record(usort_check(dec));

  Json doc;
  doc["header"] = {{"tool", "dsieve"}, {"command", "check"}};
  doc["instance"] = std::filesystem::path(args.instance).filename().string();
  doc["n"] = inst.n();
  doc["m"] = inst.m();
  doc["t"] = args.t;
  doc["pass"] = ok;
  doc["checks"] = std::move(checks);
  if (!args.output.empty()) emit(args.output, doc.dump(2) + "\n");
  return ok ? kExitOk : kExitVerification;
}

// ---------------------------------------------------------------- compare-backends

struct CompareArgs {
  std::string instance;
  int t = 1;
  std::uint64_t rounds = 4096;
  std::optional<std::uint64_t> seed;
  std::string output;
};

int cmd_compare(const CompareArgs& args) {
  const auto inst = read_instance(args.instance);
  if (args.t < 0 || (args.t > 0 && args.t >= inst.n()))
    throw InvalidParameters("compare-backends needs t = 0 (single node) or 1 <= t < n");
  const Seed seed = resolve_seed(args.seed);
  Rng rng(seed.value);
  const auto cmp = compare_backends(inst, args.t, args.rounds, rng);
  const std::uint64_t M = args.t == 0 ? inst.size() : decompose(inst, args.t).suffix_size();
  auto histogram = [M](const std::vector<std::uint64_t>& labels) {
    std::vector<std::uint64_t> counts(M, 0);
    for (auto l : labels) ++counts[l];
    return counts;
  };
  Json doc;
  doc["header"] = header("compare-backends", seed);
  doc["config"] = {{"instance", std::filesystem::path(args.instance).filename().string()},
                   {"t", args.t},
                   {"rounds", args.rounds}};
  doc["pass"] = cmp.pass;
  doc["histogram_test"] = to_json(cmp.histogram);
  doc["fidelity"] = {{"checks", cmp.fidelity_checks},
                     {"failures", cmp.fidelity_failures},
                     {"min", cmp.min_fidelity},
                     {"tolerance", kFidelityTolerance}};
  doc["circuit_counts"] = histogram(cmp.circuit_labels);
  doc["analytic_counts"] = histogram(cmp.analytic_labels);
  if (!args.output.empty()) emit(args.output, doc.dump(2) + "\n");
  std::cout << (cmp.pass ? "PASS" : "FAIL") << " p=" << cmp.histogram.statistic << " fidelity checks "
            << cmp.fidelity_checks << " failures " << cmp.fidelity_failures << " min " << cmp.min_fidelity << "\n";
  return cmp.pass ? kExitOk : kExitVerification;
}

// ---------------------------------------------------------------- sieve-profile

struct ProfileArgs {
  int k = 8;
  std::uint64_t runs = 20;
  std::optional<std::uint64_t> budget;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::string format = "json";
  bool no_salvage = false;
  std::string output;
};

int cmd_profile(const ProfileArgs& args) {
  if (args.k < 1 || args.k > 40) throw InvalidParameters("-k must be in [1, 40]");
  if (args.format != "json" && args.format != "csv") throw InvalidParameters("--format must be json or csv");
  const Seed seed = resolve_seed(args.seed);
  const Rng root(seed.value);
  const std::uint64_t M = std::uint64_t{1} << args.k;
  const std::uint64_t budget = args.budget.value_or(default_budget(args.k));
  const SieveOptions options{!args.no_salvage};

  struct Run {
    SieveStats stats;
    bool exhausted = false;
  };
  std::vector<Run> runs(args.runs);
  parallel_for(args.runs, args.jobs, [&](std::size_t i) {
    const Rng run = root.child("run", i);
    const LabelSource source = [&](std::uint64_t index) {
      Rng fresh = run.child("fresh", index);
      return sample_label(M, fresh);
    };
    Rng sieve_rng = run.child("sieve");
    try {
      runs[i].stats = run_sieve(source, M, budget, sieve_rng, options).stats;
    } catch (const Exhausted& e) {
      runs[i].stats = e.stats();
      runs[i].exhausted = true;
    }
  });

  std::uint64_t exhausted = 0;
  double fresh_total = 0;
  for (const auto& r : runs) {
    exhausted += r.exhausted ? 1 : 0;
    fresh_total += static_cast<double>(r.stats.fresh_drawn);
  }
  const double mean = fresh_total / static_cast<double>(args.runs);

  std::string text;
  if (args.format == "json") {
    Json doc;
    doc["header"] = header("sieve-profile", seed);
    doc["config"] = {{"k", args.k}, {"M", M}, {"runs", args.runs}, {"budget", budget}, {"salvage", options.salvage}};
    Json list = Json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
      Json entry{{"run", i}, {"exhausted", runs[i].exhausted}};
      entry["stats"] = to_json(runs[i].stats);
      list.push_back(std::move(entry));
    }
    doc["runs"] = std::move(list);
    doc["summary"] = {{"mean_fresh_labels", mean}, {"exhausted", exhausted}};
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "# dsieve sieve-profile k=" << args.k << " seed=" << seed.value
       << (seed.automatic ? " (auto)" : "") << "\n";
    os << "run,stage,drawn,combined,discarded,survived\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
      for (const auto& st : runs[i].stats.stages)
        os << i << ',' << st.stage << ',' << st.drawn << ',' << st.combined << ',' << st.discarded << ','
           << st.survived << '\n';
    }
    text = os.str();
  }
  emit(args.output, text);
  std::cerr << "k=" << args.k << ": mean fresh labels " << mean << " over " << args.runs << " runs, "
            << exhausted << " exhausted\n";
  return exhausted > 0 ? kExitBudget : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dsieve: distributed Kuperberg-sieve hidden shift solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dsieve 1.0.0");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a planted instance or emit the experiment instance");
  g->add_flag("--table1", gen.table1, "Emit the embedded 3-bit experiment instance (a=7)");
  g->add_option("-n", gen.n, "Input bits")->check(CLI::Range(1, kMaxDomainBits));
  g->add_option("-m", gen.m, "Output bits (default n)");
  g->add_option("-a", gen.a, "Hidden shift (default: drawn from the seed)");
  g->add_option("--seed", gen.seed, "RNG seed");
  g->add_flag("--blind", gen.blind, "Omit the hidden shift from the file");
  g->add_flag("--show", gen.show, "Print the truth table to stderr");
  g->add_option("-o,--output", gen.output, "Output file (default stdout)");
  g->get_option("--table1")->excludes(g->get_option("-n"));

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Recover the hidden shift of an instance");
  s->add_option("instance", solve.instance, "Instance JSON")->required();
  s->add_option("--mode", solve.mode, "single | distributed")->check(CLI::IsMember({"single", "distributed"}));
  s->add_option("-t", solve.t, "Prefix bits (nodes = 2^t) for distributed mode");
  s->add_option("--backend", solve.backend, "circuit | analytic")->check(CLI::IsMember({"circuit", "analytic"}));
  s->add_option("--budget", solve.budget, "Fresh labels per sieve run");
  s->add_option("--seed", solve.seed, "RNG seed");
  s->add_option("--runs", solve.runs, "Independent seeded runs");
  s->add_option("--jobs", solve.jobs, "Worker threads (does not change results)");
  s->add_flag("--no-salvage", solve.no_salvage, "Drop every sum-branch combination result");
  s->add_flag("--resources", solve.resources, "Add the distributed vs monolithic resource table");
  s->add_option("-o,--output", solve.output, "Report JSON (default stdout)");

  HistArgs hist;
  auto* h = app.add_subcommand("hist", "One-shot label histograms, single and distributed");
  h->add_option("instance", hist.instance, "Instance JSON")->required();
  h->add_option("-t", hist.t, "Prefix bits for the distributed round");
  h->add_option("--shots", hist.shots, "Independent pre-sieve rounds per mode");
  h->add_option("--backend", hist.backend, "circuit | analytic")->check(CLI::IsMember({"circuit", "analytic"}));
  h->add_option("--seed", hist.seed, "RNG seed");
  h->add_option("--jobs", hist.jobs, "Worker threads (does not change results)");
  h->add_option("-o,--output", hist.prefix, "Output prefix: <p>_single.csv, <p>_distributed.csv, <p>_summary.json");

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Verify injectivity, the shift, the sorted-string theorem and U_sort");
  c->add_option("instance", check.instance, "Instance JSON")->required();
  c->add_option("-t", check.t, "Prefix bits");
  c->add_option("-o,--output", check.output, "Report JSON");

  CompareArgs compare;
  auto* cb = app.add_subcommand("compare-backends", "Circuit vs analytic label distributions");
  cb->add_option("instance", compare.instance, "Instance JSON")->required();
  cb->add_option("-t", compare.t, "Prefix bits; 0 selects the single-node round");
  cb->add_option("--rounds", compare.rounds, "Rounds per backend");
  cb->add_option("--seed", compare.seed, "RNG seed");
  cb->add_option("-o,--output", compare.output, "Report JSON");

  ProfileArgs profile;
  auto* p = app.add_subcommand("sieve-profile", "Per-stage sieve statistics on analytic labels");
  p->add_option("-k", profile.k, "Modulus bits (M = 2^k)");
  p->add_option("--runs", profile.runs, "Independent sieve runs");
  p->add_option("--budget", profile.budget, "Fresh labels per run");
  p->add_option("--seed", profile.seed, "RNG seed");
  p->add_option("--jobs", profile.jobs, "Worker threads (does not change results)");
  p->add_option("--format", profile.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  p->add_flag("--no-salvage", profile.no_salvage, "Drop every sum-branch combination result");
  p->add_option("-o,--output", profile.output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*s) return cmd_solve(solve);
    if (*h) return cmd_hist(hist);
    if (*c) return cmd_check(check);
    if (*cb) return cmd_compare(compare);
    if (*p) return cmd_profile(profile);
  } catch (const Exhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kExitVerification;
  } catch (const Error& e) {
    // Invalid parameters, missing ground truth, backend too large, width or
    // modulus mismatches: all configuration problems.
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitInvalid;
}
