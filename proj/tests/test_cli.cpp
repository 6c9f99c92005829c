#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "gur/json_io.hpp"

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Runs the CLI with stdout captured and stderr discarded.
RunResult run_cli(const std::string& args) {
  const std::string out_path = "cli_stdout.tmp";
  const std::string cmd =
      std::string(GUR_CLI_PATH) + " " + args + " > " + out_path + " 2> /dev/null";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out_path);
  std::remove(out_path.c_str());
  return r;
}

}  // namespace

TEST_CASE("check runs to completion and reports verdicts") {
  const RunResult r =
      run_cli("check --rule luders --only born,coherence --trials 40");
  CHECK(r.code == 0);
  const nlohmann::json arr = nlohmann::json::parse(r.out);
  REQUIRE(arr.size() == 2);
  CHECK(arr[0].at("check") == "born");
  CHECK(arr[0].at("verdict") == "holds");
  CHECK(arr[1].at("check") == "coherence");
  // Violations alone do not change the exit code.
  const RunResult v =
      run_cli("check --rule passive --only coherence --trials 40");
  CHECK(v.code == 0);
  const nlohmann::json varr = nlohmann::json::parse(v.out);
  CHECK(varr[0].at("verdict") == "violated");
  CHECK(varr[0].at("witness").is_object());
}

TEST_CASE("check compares against a reference column on request") {
  const RunResult ok =
      run_cli("check --rule mu:0.5 --only A5,A6 --trials 40 --expect table2");
  CHECK(ok.code == 0);
  // The computed cc-dep A6 verdict diverges from the reference matrix.
  const RunResult bad =
      run_cli("check --rule cc-dep --only A6 --trials 40 --expect table2");
  CHECK(bad.code == 1);
  // A rule with no column in the requested table is a usage error.
  const RunResult usage =
      run_cli("check --rule luders --only A1 --trials 40 --expect table2");
  CHECK(usage.code == 2);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("check --rule nosuch").code == 2);
  CHECK(run_cli("check --rule luders --only nosuch").code == 2);
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("table 3").code == 2);
  CHECK(run_cli("table 1 --dims 1,2").code == 2);
  CHECK(run_cli("counterexample xyz").code == 2);
  CHECK(run_cli("chsh --rule nosuch").code == 2);
}

TEST_CASE("table 1 matches the reference and emits byte-stable json") {
  const std::string base =
      "table 1 --seed 42 --trials 60 --format json --out ";
  const RunResult a = run_cli(base + "cli_t1_a.json");
  const RunResult b = run_cli(base + "cli_t1_b.json");
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  const std::string ja = slurp("cli_t1_a.json");
  const std::string jb = slurp("cli_t1_b.json");
  CHECK(!ja.empty());
  CHECK(ja == jb);
  const nlohmann::json parsed = nlohmann::json::parse(ja);
  CHECK(parsed.at("table") == 1);
  CHECK(parsed.at("seed") == 42);
  std::remove("cli_t1_a.json");
  std::remove("cli_t1_b.json");
}

TEST_CASE("table 2 exits nonzero on the known divergent cell") {
  const RunResult r = run_cli("table 2 --trials 60 --format md");
  CHECK(r.code == 1);
  CHECK(r.out.find("| assumption |") != std::string::npos);
}

TEST_CASE("counterexamples replay from the command line") {
  const RunResult r = run_cli("counterexample dep-cc");
  CHECK(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("matches") == true);
  CHECK(j.at("distance_lhs").get<double>() <= 1e-9);
  CHECK(run_cli("counterexample passive-gemenge").code == 0);
  CHECK(run_cli("counterexample mu-ordering --mu 0.5").code == 0);
}

TEST_CASE("chsh reports scores and order dependence") {
  const RunResult lud = run_cli("chsh --rule luders");
  CHECK(lud.code == 0);
  const nlohmann::json j = nlohmann::json::parse(lud.out);
  CHECK(j.at("order_dependent") == false);
  CHECK(j.at("values").size() == 1);
  CHECK(std::abs(j.at("values")[0].get<double>() - 2.8284271247461903) <=
        1e-9);
  const RunResult mu = run_cli("chsh --rule mu:0.5");
  CHECK(mu.code == 0);
  CHECK(nlohmann::json::parse(mu.out).at("values").size() == 2);
  const RunResult md = run_cli("chsh --rule loc-luders --format md");
  CHECK(md.code == 0);
  CHECK(md.out.find("S(loc-luders") != std::string::npos);
}

TEST_CASE("the seed environment variable sets the default seed") {
  const RunResult r = run_cli(
      "table 2 --trials 40 --format json --out cli_seed_env.json "
      "--seed 7");
  CHECK(r.code == 1);
  const nlohmann::json j = nlohmann::json::parse(slurp("cli_seed_env.json"));
  CHECK(j.at("seed") == 7);
  std::remove("cli_seed_env.json");
  // GUR_SEED picks the default when --seed is absent.
  const std::string cmd = std::string("GUR_SEED=9 ") + GUR_CLI_PATH +
                          " table 1 --trials 40 --format json --out "
                          "cli_seed_env2.json 2> /dev/null";
  const int raw = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(raw) == 0);
  const nlohmann::json j2 = nlohmann::json::parse(slurp("cli_seed_env2.json"));
  CHECK(j2.at("seed") == 9);
  std::remove("cli_seed_env2.json");
}
