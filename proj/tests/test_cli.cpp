#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dsieve/io.hpp"
#include "dsieve/verify.hpp"

using namespace dsieve;
namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("dsieve_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// Runs the CLI inside the work directory; returns its exit code.
int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = "cd '" + workdir().string() + "' && " + env + " '" DSIEVE_CLI_PATH "' " + args +
                          " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& name) {
  std::ifstream in(workdir() / name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json json(const std::string& name) { return Json::parse(slurp(name)); }

}  // namespace

TEST_CASE("gen") {
  REQUIRE(run("gen --table1 -o t1.json") == 0);
  CHECK(brute_force_shift(read_instance(workdir() / "t1.json").blind()) == std::optional<std::uint64_t>(7));

  REQUIRE(run("gen -n 8 -m 8 -a 0 --seed 1 -o zero.json") == 0);
  const auto doc = json("zero.json");
  CHECK(doc["f"] == doc["g"]);
  CHECK(doc["seed"] == 1);

  CHECK(run("gen -n 8 -m 4 --seed 1 -o bad.json") == 2);
  CHECK_FALSE(fs::exists(workdir() / "bad.json"));

  REQUIRE(run("gen -n 6 -m 7 -o auto.json") == 0);
  CHECK(json("auto.json")["seed_source"] == "auto");
}

TEST_CASE("solve on the experiment instance") {
  REQUIRE(run("gen --table1 -o t1.json") == 0);
  REQUIRE(run("solve t1.json --mode distributed -t 1 --backend circuit --seed 3 -o d.json") == 0);
  auto d = json("d.json");
  CHECK(d["runs"][0]["a"] == 7);
  CHECK(d["runs"][0]["matches_planted"] == true);
  CHECK(d["header"]["seed"] == 3);
  CHECK(d["header"]["seed_source"] == "explicit");

  REQUIRE(run("solve t1.json --mode single --backend circuit --seed 3 -o s.json") == 0);
  CHECK(json("s.json")["runs"][0]["a"] == 7);

  REQUIRE(run("solve t1.json --mode distributed -t 1 --seed 4 --resources -o res.json") == 0);
  const auto res = json("res.json")["resources"];
  CHECK(res["distributed_oracle_width"] == 2);
  CHECK(res["monolithic_oracle_width"] == 3);

  REQUIRE(run("solve t1.json -o auto.json") == 0);
  CHECK(json("auto.json")["header"]["seed_source"] == "auto");
}

TEST_CASE("solve at n=16, t=4") {
  REQUIRE(run("gen -n 16 -m 16 --seed 9 -o n16.json") == 0);
  REQUIRE(run("solve n16.json --mode distributed -t 4 --backend analytic --seed 2 -o r.json") == 0);
  const auto inst = read_instance(workdir() / "n16.json");
  CHECK(json("r.json")["runs"][0]["a"] == *brute_force_shift(inst.blind()));
}

TEST_CASE("blind instances") {
  REQUIRE(run("gen -n 5 -m 5 -a 13 --seed 2 --blind -o blind.json") == 0);
  CHECK(run("solve blind.json --seed 1 -o x.json") == 2);  // analytic needs the planted shift
  REQUIRE(run("solve blind.json --backend circuit --seed 1 -o b.json") == 0);
  CHECK(json("b.json")["runs"][0]["a"] == 13);
  CHECK(json("b.json")["runs"][0]["matches_planted"].is_null());
}

TEST_CASE("exit codes") {
  REQUIRE(run("gen -n 12 -m 12 --seed 3 -o n12.json") == 0);
  CHECK(run("solve n12.json --budget 3 --seed 1 -o ex.json") == 4);
  CHECK(json("ex.json")["runs"][0]["exhausted"]["stats"]["fresh_drawn"] == 3);
  CHECK(run("solve t1.json --mode distributed --backend circuit --seed 1 -o cap.json", "DSIEVE_QUBIT_CAP=10") == 2);
  CHECK(run("solve t1.json --mode distributed --backend circuit --seed 1 -o cap.json", "DSIEVE_QUBIT_CAP=19") == 0);
  CHECK(run("solve t1.json --mode bogus --seed 1") == 2);
  CHECK(run("solve missing.json --seed 1") == 2);
  CHECK(run("solve t1.json --mode distributed -t 3 --seed 1") == 2);
  CHECK(run("frobnicate") == 2);
}

TEST_CASE("check") {
  REQUIRE(run("gen --table1 -o t1.json") == 0);
  CHECK(run("check t1.json -t 1 -o c.json") == 0);
  CHECK(json("c.json")["pass"] == true);
  CHECK(run("check t1.json -t 3") == 2);

  auto doc = json("t1.json");
  doc["g"][2] = "f";
  write_atomic(workdir() / "corrupt.json", doc.dump());
  CHECK(run("check corrupt.json -t 1 -o cc.json") == 3);
  const auto report = json("cc.json");
  bool saw_counterexample = false;
  for (const auto& c : report["checks"]) {
    if (c["name"] == "theorem1") saw_counterexample = c.contains("counterexample");
  }
  CHECK(saw_counterexample);

  REQUIRE(run("gen -n 10 -m 11 --seed 4 -o n10.json") == 0);
  CHECK(run("check n10.json -t 3") == 0);
}

TEST_CASE("hist") {
  REQUIRE(run("gen --table1 -o t1.json") == 0);
  REQUIRE(run("hist t1.json -t 1 --shots 2048 --seed 5 -o h") == 0);
  const auto csv = slurp("h_distributed.csv");
  CHECK(csv.rfind("outcome,count\n", 0) == 0);
  const auto summary = json("h_summary.json");
  CHECK(summary["modes"][1]["M"] == 4);
  CHECK(summary["modes"][1]["expected_frequency"] == 0.25);
  CHECK(summary["modes"][1]["within_3_sigma"] == true);
  CHECK(summary["modes"][0]["M"] == 8);
}

TEST_CASE("compare-backends and sieve-profile") {
  REQUIRE(run("gen --table1 -o t1.json") == 0);
  CHECK(run("compare-backends t1.json -t 1 --rounds 4096 --seed 6 -o cmp.json") == 0);
  CHECK(json("cmp.json")["pass"] == true);
  CHECK(run("compare-backends t1.json -t 0 --rounds 1024 --seed 6") == 0);

  CHECK(run("sieve-profile -k 10 --runs 4 --seed 1 -o p.json") == 0);
  CHECK(json("p.json")["runs"].size() == 4);
  CHECK(run("sieve-profile -k 10 --runs 4 --seed 1 --format csv -o p.csv") == 0);
  CHECK(slurp("p.csv").find("run,stage,drawn,combined,discarded,survived") != std::string::npos);
  CHECK(run("sieve-profile -k 14 --runs 2 --budget 5 --seed 1 -o pe.json") == 4);
}

TEST_CASE("reproducibility and --jobs") {
  REQUIRE(run("gen -n 10 -m 10 --seed 8 -o r10.json") == 0);
  REQUIRE(run("solve r10.json --mode distributed -t 2 --runs 6 --seed 11 --jobs 1 -o j1.json") == 0);
  REQUIRE(run("solve r10.json --mode distributed -t 2 --runs 6 --seed 11 --jobs 3 -o j3.json") == 0);
  REQUIRE(run("solve r10.json --mode distributed -t 2 --runs 6 --seed 11 --jobs 3 -o j3b.json") == 0);
  CHECK(slurp("j1.json") == slurp("j3.json"));
  CHECK(slurp("j3.json") == slurp("j3b.json"));

  REQUIRE(run("gen --table1 -o t1.json") == 0);
  REQUIRE(run("hist t1.json --shots 512 --seed 2 --jobs 1 -o ha") == 0);
  REQUIRE(run("hist t1.json --shots 512 --seed 2 --jobs 4 -o hb") == 0);
  CHECK(slurp("ha_single.csv") == slurp("hb_single.csv"));
  CHECK(slurp("ha_distributed.csv") == slurp("hb_distributed.csv"));

  REQUIRE(run("sieve-profile -k 12 --runs 6 --seed 3 --jobs 1 -o pa.json") == 0);
  REQUIRE(run("sieve-profile -k 12 --runs 6 --seed 3 --jobs 4 -o pb.json") == 0);
  CHECK(slurp("pa.json") == slurp("pb.json"));

  // Atomic writes leave no temporaries behind.
  for (const auto& entry : fs::directory_iterator(workdir())) CHECK(entry.path().extension() != ".tmp");
}
