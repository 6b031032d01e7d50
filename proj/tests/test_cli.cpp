// Copyright 2026 The oqrw authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Black-box tests of the command-line binary: spawn it, capture its output
// and exit code, and check the documented contract.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "oqrw_cli_tests";
  fs::create_directories(dir);
  return dir;
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  fs::path dir = scratch_dir();
  fs::path out = dir / ("out." + std::to_string(counter));
  fs::path err = dir / ("err." + std::to_string(counter));
  ++counter;
  std::string cmd = env + (env.empty() ? "" : " ") + OQRW_CLI_PATH + " " +
                    args + " >" + out.string() + " 2>" + err.string();
  int status = std::system(cmd.c_str());
  RunResult r;
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string fixture(const std::string& name) {
  return std::string(OQRW_FIXTURE_DIR) + "/" + name;
}

std::string write_temp(const std::string& name, const std::string& body) {
  fs::path p = scratch_dir() / name;
  std::ofstream out(p, std::ios::binary);
  out << body;
  return p.string();
}

}  // namespace

TEST_CASE("version flag") {
  RunResult r = run_cli("--version");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("oqrw 1.0.0") != std::string::npos);
}

TEST_CASE("a subcommand is required") {
  RunResult r = run_cli("");
  CHECK(r.exit_code != 0);
}

TEST_CASE("validate: normalized fixtures exit zero") {
  for (const char* name :
       {"walk_pair_one.json", "walk_pair_two.json", "walk_three_state.json",
        "unitary_column_ring.json", "mixing_two_site.json",
        "classical_cycle3.json"}) {
    RunResult r = run_cli("validate --model " + fixture(name));
    CHECK(r.exit_code == 0);
    json rep = json::parse(r.out);
    CHECK(rep["valid"] == true);
  }
}

TEST_CASE("validate: a defective model exits one with its report") {
  std::string path = write_temp("bad_model.json", R"({
    "kind": "explicit",
    "hdim": 1,
    "sites": [0],
    "ops": [{"from": 0, "to": 0, "matrix": [[2.0]]}]
  })");
  RunResult r = run_cli("validate --model " + path);
  CHECK(r.exit_code == 1);
  json rep = json::parse(r.out);
  CHECK(rep["valid"] == false);
  CHECK(rep["max_defect"].get<double>() == doctest::Approx(3.0));
}

TEST_CASE("validate: malformed documents exit two") {
  std::string path = write_temp("broken.json", "{\"kind\": ");
  RunResult r = run_cli("validate --model " + path);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("[error]") != std::string::npos);

  RunResult missing = run_cli("validate --model /nonexistent/nope.json");
  CHECK(missing.exit_code == 2);
}

TEST_CASE("evolve writes the distribution table and final state") {
  fs::path dir = scratch_dir() / "evolve_out";
  fs::create_directories(dir);
  RunResult r = run_cli("evolve --model " + fixture("walk_pair_one.json") +
                        " --state " + fixture("state_origin_e1.json") +
                        " --steps 4 --out " + dir.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("wrote ") != std::string::npos);

  std::string csv = slurp(dir / "distribution.csv");
  CHECK(csv.rfind("step,site,probability\n", 0) == 0);
  CHECK(csv.find("0,0,1\n") != std::string::npos);

  json final_state = json::parse(slurp(dir / "final_state.json"));
  REQUIRE(final_state["blocks"].is_array());
  double total = 0.0;
  for (const auto& b : final_state["blocks"]) {
    const auto& m = b["matrix"];
    for (std::size_t k = 0; k < m.size(); ++k) {
      total += m[k][k][0].get<double>();
    }
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("evolve refuses stepping past the window") {
  std::string path = write_temp("tiny_window.json", R"({
    "kind": "lattice1d",
    "hdim": 2,
    "window": 2,
    "offsets": [
      {"offset": -1, "matrix": [[[0.0,0.0],[0.0,0.0]],[[0.7071067811865476,0.0],[0.7071067811865476,0.0]]]},
      {"offset": 1, "matrix": [[[0.0,0.0],[0.0,0.0]],[[-0.7071067811865476,0.0],[0.7071067811865476,0.0]]]}
    ]
  })");
  RunResult r = run_cli("evolve --model " + path + " --state " +
                        fixture("state_origin_e1.json") + " --steps 5 --out " +
                        scratch_dir().string());
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("BoundaryViolation") != std::string::npos);
}

TEST_CASE("qmc-eval prints the value report") {
  RunResult r = run_cli("qmc-eval --model " + fixture("mixing_two_site.json") +
                        " --state " + fixture("state_origin_e1.json") +
                        " --steps 25 " + fixture("cylinder_identity_3.json"));
  CHECK(r.exit_code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["value"][0].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep["value"][1].get<double>() == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(rep["pair_check"]["unit_residual"].get<double>() <= 1e-9);
}

TEST_CASE("qmc-eval with a missing cylinder file exits two") {
  RunResult r = run_cli("qmc-eval --model " + fixture("mixing_two_site.json") +
                        " --state " + fixture("state_origin_e1.json") +
                        " --steps 25 /nonexistent/cyl.json");
  CHECK(r.exit_code == 2);
}

TEST_CASE("analyze prints and optionally writes the report") {
  fs::path out = scratch_dir() / "analysis.json";
  RunResult r = run_cli("analyze --model " + fixture("walk_pair_one.json") +
                        " --state " + fixture("state_origin_e1.json") +
                        " --depth 6 --horizon 8 --out " + out.string());
  CHECK(r.exit_code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["verdict"] == "Reducible");
  CHECK(rep["consistent"] == true);
  // The written file matches the printed report byte for byte.
  CHECK(slurp(out) == r.out);
}

TEST_CASE("analyze is deterministic across runs") {
  const std::string cmd = "analyze --model " + fixture("walk_pair_two.json") +
                          " --state " + fixture("state_origin_e1.json") +
                          " --depth 5 --horizon 6";
  RunResult a = run_cli(cmd);
  RunResult b = run_cli(cmd);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("classes reports the chain structure") {
  RunResult r =
      run_cli("classes --model " + fixture("classical_two_classes.json"));
  CHECK(r.exit_code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["irreducible"] == false);
  CHECK(rep["classes"].size() == 2);

  RunResult quantum =
      run_cli("classes --model " + fixture("mixing_two_site.json"));
  CHECK(quantum.exit_code == 1);
}

TEST_CASE("invariant search on the ring") {
  RunResult r =
      run_cli("invariant --model " + fixture("unitary_column_ring.json"));
  CHECK(r.exit_code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["found"] == true);
  CHECK(rep["residual"].get<double>() <= 1e-10);
}

TEST_CASE("log level is controlled by the environment") {
  RunResult quiet = run_cli("validate --model " + fixture("mixing_two_site.json"));
  CHECK(quiet.err.find("[info]") == std::string::npos);

  RunResult chatty = run_cli(
      "validate --model " + fixture("mixing_two_site.json"), "OQRW_LOG=info");
  CHECK(chatty.exit_code == 0);
  CHECK(chatty.err.find("[info]") != std::string::npos);
}
