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

// Command-line front end; talks to the library through its C interface
// only.  Exit codes: 0 success, 1 validation failure, 2 document parse
// failure, 3 internal inconsistency.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "oqrw/oqrw.h"

namespace {

int log_level() {
  static int level = [] {
    const char* env = std::getenv("OQRW_LOG");
    if (!env) return 0;
    std::string s(env);
    if (s == "debug") return 2;
    if (s == "info") return 1;
    return 0;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[info] " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[debug] " << msg << "\n";
}

void log_error(const std::string& msg) { std::cerr << "[error] " << msg << "\n"; }

using ModelHandle = std::unique_ptr<oqrw_model, decltype(&oqrw_model_free)>;
using StateHandle = std::unique_ptr<oqrw_state, decltype(&oqrw_state_free)>;
using TrajectoryHandle =
    std::unique_ptr<oqrw_trajectory, decltype(&oqrw_trajectory_free)>;
using StringHandle = std::unique_ptr<char, decltype(&oqrw_string_free)>;

StringHandle own(char* s) { return StringHandle(s, &oqrw_string_free); }

// Reports the library error and converts the status to the exit code.
int bail(oqrw_status st, const std::string& context) {
  log_error(context + ": " + oqrw_last_error());
  return static_cast<int>(st);
}

ModelHandle load_model(const std::string& path, oqrw_status* st) {
  oqrw_model* raw = nullptr;
  *st = oqrw_model_from_file(path.c_str(), &raw);
  log_debug("loaded model " + path);
  return ModelHandle(raw, &oqrw_model_free);
}

StateHandle load_state(const std::string& path, oqrw_status* st) {
  oqrw_state* raw = nullptr;
  *st = oqrw_state_from_file(path.c_str(), &raw);
  log_debug("loaded state " + path);
  return StateHandle(raw, &oqrw_state_free);
}

bool write_text(const std::string& path, const char* content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

bool read_text(const std::string& path, std::string* out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  *out = buf.str();
  return true;
}

struct CommonArgs {
  std::string model;
  std::string state;
  double tol = 0.0;  // 0 = library default
};

int run_validate(const CommonArgs& args) {
  oqrw_status st;
  ModelHandle m = load_model(args.model, &st);
  if (st != OQRW_OK) return bail(st, "loading model");
  int valid = 0;
  char* report = nullptr;
  st = oqrw_model_validate(m.get(), args.tol, &valid, &report);
  StringHandle guard = own(report);
  if (st != OQRW_OK) return bail(st, "validating model");
  std::cout << report;
  if (!valid) {
    log_error("model fails normalization");
    return 1;
  }
  log_info("model is normalized");
  return 0;
}

int run_evolve(const CommonArgs& args, int steps, const std::string& out_dir) {
  oqrw_status st;
  ModelHandle m = load_model(args.model, &st);
  if (st != OQRW_OK) return bail(st, "loading model");
  StateHandle s = load_state(args.state, &st);
  if (st != OQRW_OK) return bail(st, "loading state");

  oqrw_trajectory* traj_raw = nullptr;
  st = oqrw_trajectory_run(m.get(), s.get(), steps, &traj_raw);
  TrajectoryHandle traj(traj_raw, &oqrw_trajectory_free);
  if (st != OQRW_OK) return bail(st, "running trajectory");
  log_info("ran " + std::to_string(steps) + " steps");

  char* csv = nullptr;
  st = oqrw_trajectory_distribution_csv(traj.get(), &csv);
  StringHandle csv_guard = own(csv);
  if (st != OQRW_OK) return bail(st, "rendering distribution");

  oqrw_state* final_raw = nullptr;
  st = oqrw_trajectory_state(traj.get(), steps, &final_raw);
  StateHandle final_state(final_raw, &oqrw_state_free);
  if (st != OQRW_OK) return bail(st, "extracting final state");
  char* final_json = nullptr;
  st = oqrw_state_to_json(final_state.get(), &final_json);
  StringHandle json_guard = own(final_json);
  if (st != OQRW_OK) return bail(st, "rendering final state");

  const std::string csv_path = out_dir + "/distribution.csv";
  const std::string state_path = out_dir + "/final_state.json";
  if (!write_text(csv_path, csv) || !write_text(state_path, final_json)) {
    log_error("cannot write outputs under " + out_dir);
    return 1;
  }
  std::cout << "wrote " << csv_path << "\n";
  std::cout << "wrote " << state_path << "\n";
  return 0;
}

int run_qmc_eval(const CommonArgs& args, int steps, int horizon,
                 const std::string& cylinder_path) {
  oqrw_status st;
  ModelHandle m = load_model(args.model, &st);
  if (st != OQRW_OK) return bail(st, "loading model");
  StateHandle s = load_state(args.state, &st);
  if (st != OQRW_OK) return bail(st, "loading state");
  std::string cylinder;
  if (!read_text(cylinder_path, &cylinder)) {
    log_error("cannot open " + cylinder_path);
    return 2;
  }

  oqrw_trajectory* traj_raw = nullptr;
  st = oqrw_trajectory_run(m.get(), s.get(), steps, &traj_raw);
  TrajectoryHandle traj(traj_raw, &oqrw_trajectory_free);
  if (st != OQRW_OK) return bail(st, "running trajectory");

  double re = 0.0, im = 0.0;
  char* report = nullptr;
  st = oqrw_qmc_evaluate(traj.get(), cylinder.c_str(), horizon, args.tol, &re,
                         &im, &report);
  StringHandle guard = own(report);
  if (st != OQRW_OK) return bail(st, "evaluating");
  std::cout << report;
  log_info("value " + std::to_string(re) + (im < 0 ? " - " : " + ") +
           std::to_string(std::abs(im)) + "i");
  return 0;
}

int run_analyze(const CommonArgs& args, int depth, int n0, int horizon,
                std::uint64_t seed, const std::string& out_path) {
  oqrw_status st;
  ModelHandle m = load_model(args.model, &st);
  if (st != OQRW_OK) return bail(st, "loading model");
  StateHandle s = load_state(args.state, &st);
  if (st != OQRW_OK) return bail(st, "loading state");

  char* report = nullptr;
  st = oqrw_analyze(m.get(), s.get(), depth, n0, horizon, args.tol, seed,
                    &report);
  StringHandle guard = own(report);
  // An internal contradiction still produces a report; print it, then fail.
  if (report) {
    std::cout << report;
    if (!out_path.empty() && !write_text(out_path, report)) {
      log_error("cannot write " + out_path);
      return 1;
    }
  }
  if (st != OQRW_OK) return bail(st, "analyzing");
  return 0;
}

int run_classes(const CommonArgs& args) {
  oqrw_status st;
  ModelHandle m = load_model(args.model, &st);
  if (st != OQRW_OK) return bail(st, "loading model");
  char* report = nullptr;
  st = oqrw_classical_classes(m.get(), &report);
  StringHandle guard = own(report);
  if (st != OQRW_OK) return bail(st, "computing classes");
  std::cout << report;
  return 0;
}

int run_invariant(const CommonArgs& args) {
  oqrw_status st;
  ModelHandle m = load_model(args.model, &st);
  if (st != OQRW_OK) return bail(st, "loading model");
  int found = 0;
  char* report = nullptr;
  st = oqrw_invariant_state(m.get(), args.tol, &found, &report);
  StringHandle guard = own(report);
  if (st != OQRW_OK) return bail(st, "searching invariant state");
  std::cout << report;
  log_info(found ? "fixed point found" : "no fixed point at tolerance");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"open quantum random walk toolkit"};
  app.set_version_flag("--version", oqrw_version());
  app.require_subcommand(1);

  CommonArgs args;
  int steps = 10;
  int depth = 10;
  int n0 = 1;
  int horizon = -1;  // library default
  std::uint64_t seed = 0x5EED;
  std::string out_dir = ".";
  std::string out_path;
  std::string cylinder_path;

  CLI::App* validate = app.add_subcommand("validate", "check model normalization");
  validate->add_option("--model", args.model, "model document")->required();
  validate->add_option("--tol", args.tol, "tolerance (0 = default)");

  CLI::App* evolve = app.add_subcommand("evolve", "run the walk and write outputs");
  evolve->add_option("--model", args.model, "model document")->required();
  evolve->add_option("--state", args.state, "initial state document")->required();
  evolve->add_option("--steps", steps, "number of steps")->required();
  evolve->add_option("--tol", args.tol, "tolerance (0 = default)");
  evolve->add_option("--out", out_dir, "output directory");

  CLI::App* qmc = app.add_subcommand("qmc-eval", "evaluate a cylinder observable");
  qmc->add_option("--model", args.model, "model document")->required();
  qmc->add_option("--state", args.state, "initial state document")->required();
  qmc->add_option("--steps", steps, "trajectory length")->required();
  qmc->add_option("--horizon", horizon, "limit-operator horizon");
  qmc->add_option("--tol", args.tol, "tolerance (0 = default)");
  qmc->add_option("cylinder", cylinder_path, "cylinder document")->required();

  CLI::App* analyze = app.add_subcommand("analyze", "run the reducibility criteria");
  analyze->add_option("--model", args.model, "model document")->required();
  analyze->add_option("--state", args.state, "initial state document")->required();
  analyze->add_option("--depth", depth, "analysis depth")->required();
  analyze->add_option("--n0", n0, "witness start step");
  analyze->add_option("--horizon", horizon, "limit-operator horizon");
  analyze->add_option("--tol", args.tol, "tolerance (0 = default)");
  analyze->add_option("--seed", seed, "closure sampling seed");
  analyze->add_option("--out", out_path, "also write the report here");

  CLI::App* classes = app.add_subcommand("classes", "communicating classes of a classical model");
  classes->add_option("--model", args.model, "model document")->required();

  CLI::App* invariant = app.add_subcommand("invariant", "search a fixed point of the transition map");
  invariant->add_option("--model", args.model, "model document")->required();
  invariant->add_option("--tol", args.tol, "tolerance (0 = default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  if (app.got_subcommand(validate)) return run_validate(args);
  if (app.got_subcommand(evolve)) return run_evolve(args, steps, out_dir);
  if (app.got_subcommand(qmc)) {
    return run_qmc_eval(args, steps, horizon, cylinder_path);
  }
  if (app.got_subcommand(analyze)) {
    return run_analyze(args, depth, n0, horizon, seed, out_path);
  }
  if (app.got_subcommand(classes)) return run_classes(args);
  if (app.got_subcommand(invariant)) return run_invariant(args);
  return 1;
}
