#include "dsieve/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace dsieve {

namespace {

std::string hex_of(std::uint64_t value, int bits) {
  std::ostringstream os;
  os << std::hex << std::setfill('0') << std::setw((bits + 3) / 4) << value;
  return os.str();
}

std::uint64_t parse_hex(const std::string& text) {
  std::string digits = text;
  if (digits.rfind("0x", 0) == 0 || digits.rfind("0X", 0) == 0) digits = digits.substr(2);
  if (digits.empty() || digits.size() > 16) throw InvalidParameters("bad hex value '" + text + "'");
  std::uint64_t value = 0;
  for (char c : digits) {
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
    else throw InvalidParameters("bad hex value '" + text + "'");
    value = (value << 4) | static_cast<std::uint64_t>(d);
  }
  return value;
}

std::string bits_of(std::uint64_t value, int width) {
  std::string out;
  for (int i = width - 1; i >= 0; --i) out += ((value >> i) & 1U) ? '1' : '0';
  return out;
}

}  // namespace

Json instance_to_json(const HiddenShiftInstance& instance) {
  Json doc;
  doc["n"] = instance.n();
  doc["m"] = instance.m();
  if (instance.hidden_a()) doc["a"] = *instance.hidden_a();
  Json f = Json::array();
  Json g = Json::array();
  for (auto v : instance.f_table()) f.push_back(hex_of(v, instance.m()));
  for (auto v : instance.g_table()) g.push_back(hex_of(v, instance.m()));
  doc["f"] = std::move(f);
  doc["g"] = std::move(g);
  return doc;
}

HiddenShiftInstance instance_from_json(const Json& doc) {
  try {
    const int n = doc.at("n").get<int>();
    const int m = doc.at("m").get<int>();
    std::optional<std::uint64_t> a;
    if (doc.contains("a") && !doc.at("a").is_null()) a = doc.at("a").get<std::uint64_t>();
    std::vector<std::uint64_t> f;
    std::vector<std::uint64_t> g;
    for (const auto& v : doc.at("f")) f.push_back(parse_hex(v.get<std::string>()));
    for (const auto& v : doc.at("g")) g.push_back(parse_hex(v.get<std::string>()));
    return HiddenShiftInstance(n, m, std::move(f), std::move(g), a);
  } catch (const Json::exception& e) {
    throw InvalidParameters(std::string("malformed instance JSON: ") + e.what());
  }
}

HiddenShiftInstance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameters("cannot open " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidParameters("cannot parse " + path.string() + ": " + e.what());
  }
  return instance_from_json(doc);
}

void write_instance(const std::filesystem::path& path, const HiddenShiftInstance& instance) {
  write_atomic(path, instance_to_json(instance).dump(2) + "\n");
}

std::string format_truth_table(const HiddenShiftInstance& instance) {
  const int n = instance.n();
  const int m = instance.m();
  const int xw = std::max(n, 1);
  const int vw = std::max(m, 4);
  std::ostringstream os;
  auto header = [&] {
    os << std::left << std::setw(xw) << "x" << "  " << std::setw(vw) << "g(x)" << "  " << std::setw(vw)
       << "f(x)";
  };
  auto cells = [&](std::uint64_t x) {
    os << std::setw(xw) << bits_of(x, n) << "  " << std::setw(vw) << bits_of(instance.g(x), m) << "  "
       << std::setw(vw) << bits_of(instance.f(x), m);
  };
  const std::uint64_t half = (instance.size() + 1) / 2;
  header();
  if (instance.size() > 1) {
    os << "    ";
    header();
  }
  os << '\n';
  for (std::uint64_t x = 0; x < half; ++x) {
    cells(x);
    if (x + half < instance.size()) {
      os << "    ";
      cells(x + half);
    }
    os << '\n';
  }
  return os.str();
}

Json to_json(const SieveStats& s) {
  Json stages = Json::array();
  for (const auto& st : s.stages) {
    stages.push_back({{"stage", st.stage},       {"low_bit", st.low_bit},     {"width", st.width},
                      {"drawn", st.drawn},       {"admitted", st.admitted},   {"combined", st.combined},
                      {"produced", st.produced}, {"salvaged", st.salvaged},   {"discarded", st.discarded},
                      {"survived", st.survived}});
  }
  return {{"k", s.k},
          {"M", s.M},
          {"stage_width", s.stage_width},
          {"salvage", s.salvage},
          {"success", s.success},
          {"lucky_draw", s.lucky_draw},
          {"fresh_drawn", s.fresh_drawn},
          {"fresh_zero", s.fresh_zero},
          {"combinations", s.combinations},
          {"discarded_total", s.discarded_total},
          {"discarded_cost", s.discarded_cost},
          {"survived_total", s.survived_total},
          {"survived_cost", s.survived_cost},
          {"final_cost", s.final_cost},
          {"stages", std::move(stages)}};
}

Json to_json(const NodeCounters& c) {
  return {{"oracle_queries", c.oracle_queries},
          {"local_two_qubit_gates", c.local_two_qubit_gates},
          {"cross_node_gates", c.cross_node_gates},
          {"qubits", c.qubits},
          {"round_depth", c.round_depth},
          {"total_depth", c.total_depth},
          {"oracle_input_width", c.oracle_input_width}};
}

Json to_json(const CommLedger& ledger) {
  Json nodes = Json::array();
  for (std::size_t w = 0; w < ledger.nodes().size(); ++w) {
    Json node = to_json(ledger.nodes()[w]);
    node["node"] = w;
    nodes.push_back(std::move(node));
  }
  Json doc{{"distributed", ledger.distributed()},
           {"rounds", ledger.rounds()},
           {"fingerprint", hex_of(ledger.fingerprint(), 64)},
           {"nodes", std::move(nodes)},
           {"total_gates", ledger.total_gates()},
           {"cross_node_events", ledger.total_cross_gates()},
           {"ebits", ledger.total_cross_gates() * cost::kEbitsPerCrossGate},
           {"classical_bits", ledger.total_cross_gates() * cost::kClassicalBitsPerCrossGate}};
  if (ledger.prefix_stage().oracle_queries > 0) doc["prefix_stage"] = to_json(ledger.prefix_stage());
  return doc;
}

namespace {

Json row_json(const ResourceRow& r) {
  return {{"run", r.label},           {"node", r.node},
          {"qubits", r.qubits},       {"round_depth", r.round_depth},
          {"oracle_queries", r.oracle_queries}, {"oracle_input_width", r.oracle_input_width},
          {"cross_node_gates", r.cross_node_gates}};
}

}  // namespace

Json to_json(const ResourceReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.distributed) rows.push_back(row_json(row));
  Json doc{{"n", r.n},
           {"t", r.t},
           {"m", r.m},
           {"sorting_network", r.network},
           {"sort_layers", r.sort_layers},
           {"sort_comparators", r.sort_comparators},
           {"distributed", std::move(rows)},
           {"monolithic", row_json(r.monolithic)},
           {"distributed_oracle_width", r.distributed_oracle_width},
           {"monolithic_oracle_width", r.monolithic_oracle_width},
           {"distributed_oracle_depth", r.distributed_oracle_depth},
           {"monolithic_oracle_depth", r.monolithic_oracle_depth},
           {"cross_node_events", r.cross_node_events},
           {"ebits", r.ebits},
           {"classical_bits", r.classical_bits}};
  if (r.prefix_stage.oracle_queries > 0) doc["prefix_stage"] = row_json(r.prefix_stage);
  return doc;
}

Json to_json(const SolveReport& r) {
  Json bits = Json::array();
  for (const auto& b : r.bits) {
    bits.push_back({{"stage", b.stage},
                    {"bit", b.bit},
                    {"modulus_bits", b.modulus_bits},
                    {"parity", b.parity},
                    {"fresh_labels", b.stats.fresh_drawn},
                    {"sieve", to_json(b.stats)}});
  }
  Json doc{{"a", r.a},
           {"n", r.n},
           {"mode", to_string(r.mode)},
           {"t", r.t},
           {"backend", to_string(r.backend)},
           {"rounds", r.rounds},
           {"fidelity_checks", r.fidelity_checks}};
  doc["min_fidelity"] = r.min_fidelity ? Json(*r.min_fidelity) : Json(nullptr);
  doc["matches_planted"] = r.matches_planted ? Json(*r.matches_planted) : Json(nullptr);
  doc["bits"] = std::move(bits);
  doc["ledger"] = to_json(r.ledger);
  return doc;
}

Json to_json(const StatReport& r) {
  return {{"name", r.name},           {"statistic", r.statistic}, {"threshold", r.threshold},
          {"pass_above", r.pass_above}, {"pass", r.pass},         {"samples", r.samples},
          {"detail", r.detail}};
}

Json to_json(const Theorem1Report& r) {
  Json doc{{"pass", r.pass}, {"pairs_checked", r.pairs_checked}, {"suffix_shift", r.suffix_shift}};
  if (r.counterexample) {
    doc["counterexample"] = {{"u", r.counterexample->u},
                             {"v", r.counterexample->v},
                             {"strings_equal", r.counterexample->strings_equal},
                             {"shift_predicts", r.counterexample->shift_predicts}};
  }
  return doc;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidParameters("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw InvalidParameters("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw InvalidParameters("cannot rename onto " + path.string() + ": " + ec.message());
}

}  // namespace dsieve
