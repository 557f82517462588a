// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The rispm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "commands.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "rispm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = rispm::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

// Fresh, empty scratch directory per test case.
fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rispm_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir.parent_path());
  return dir;
}

const fs::path kFixtures = RISPM_FIXTURE_DIR;

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("closed-form fixture solve") {
  const fs::path out = scratch("closed");
  const auto r = run({"--config", (kFixtures / "closed_form.json").string(), "--out", out.string()});
  REQUIRE(r.code == rispm::cli::kOk);
  std::smatch m;
  REQUIRE(std::regex_search(r.out, m, std::regex(R"(P_opt = ([0-9.eE+-]+))")));
  CHECK(std::abs(std::stod(m[1]) - 10.8276) <= 1e-3);
  CHECK(r.out.find("P_n = ") != std::string::npos);
  CHECK(r.out.find("iterations = ") != std::string::npos);
  CHECK(fs::exists(out / "solve.csv"));
  const auto echo = nlohmann::json::parse(slurp(out / "solve.json"));
  CHECK(echo["config"]["system"]["tau"] == 3.0);
  CHECK(echo["result"]["feasible"] == true);
}

TEST_CASE("missing config is a usage error with no output") {
  const fs::path out = scratch("missing");
  const auto r = run({"--config", (kFixtures / "does_not_exist.json").string(), "--out", out.string()});
  CHECK(r.code == rispm::cli::kUsage);
  CHECK(r.err.find("cannot open config") != std::string::npos);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("malformed configs are usage errors") {
  const fs::path dir = scratch("malformed");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "unknown.json") << R"({"sytem": {}})";
    std::ofstream(dir / "broken.json") << "{";
    std::ofstream(dir / "badtype.json") << R"({"system": {"elements": "many"}})";
  }
  for (const char* name : {"unknown.json", "broken.json", "badtype.json"}) {
    const auto r = run({"--config", (dir / name).string(), "--out", (dir / "o").string()});
    CHECK(r.code == rispm::cli::kUsage);
  }
  CHECK(run({"--mode", "dance"}).code == rispm::cli::kUsage);
  CHECK(run({"--bogus"}).code == rispm::cli::kUsage);
  CHECK_FALSE(fs::exists(dir / "o"));
}

TEST_CASE("help exits cleanly") {
  const auto r = run({"--help"});
  CHECK(r.code == rispm::cli::kOk);
  CHECK(r.out.find("--mode") != std::string::npos);
}

TEST_CASE("repeating a seed reproduces every file") {
  const fs::path out = scratch("repeat");
  const std::vector<std::string> args{"--mode", "solve", "--seed", "17", "--out", out.string()};
  REQUIRE(run(args).code == 0);
  const std::string csv = slurp(out / "solve.csv");
  const std::string json = slurp(out / "solve.json");
  REQUIRE(run(args).code == 0);
  CHECK(slurp(out / "solve.csv") == csv);
  CHECK(slurp(out / "solve.json") == json);
  REQUIRE(run({"--mode", "solve", "--seed", "18", "--out", out.string()}).code == 0);
  CHECK(slurp(out / "solve.csv") != csv);
}

TEST_CASE("flags override the config file") {
  const fs::path out = scratch("override");
  const auto r = run({"--config", (kFixtures / "closed_form.json").string(), "--seed", "42", "--out",
                      out.string()});
  REQUIRE(r.code == 0);
  const auto echo = nlohmann::json::parse(slurp(out / "solve.json"));
  CHECK(echo["config"]["seed"] == 42);
  CHECK(echo["config"]["out"] == out.string());
}

TEST_CASE("output directory from the environment") {
  const fs::path out = scratch("env");
  ::setenv(rispm::cli::kOutDirEnv, out.string().c_str(), 1);
  const auto r = run({"--config", (kFixtures / "closed_form.json").string()});
  ::unsetenv(rispm::cli::kOutDirEnv);
  CHECK(r.code == 0);
  CHECK(fs::exists(out / "solve.csv"));
  CHECK(rispm::cli::resolve_out_dir("explicit") == "explicit");
  CHECK(rispm::cli::resolve_out_dir("") == "rispm_out");
}

TEST_CASE("infeasible solve exits with its own status") {
  const fs::path dir = scratch("infeasible");
  fs::create_directories(dir);
  std::ofstream(dir / "tight.json") << R"({"bisection": {"p_upper": 1e-6, "bracket_doublings": 0}})";
  const auto r = run({"--config", (dir / "tight.json").string(), "--out", (dir / "o").string()});
  CHECK(r.code == rispm::cli::kInfeasible);
  CHECK(r.err.find("infeasible") != std::string::npos);
}

TEST_CASE("sweep writes re-readable CSV and a table") {
  const fs::path out = scratch("sweep");
  const auto r = run({"--config", (kFixtures / "small_sweep.json").string(), "--out", out.string(),
                      "--symbols", "2"});
  REQUIRE(r.code == 0);
  std::ifstream csv(out / "sweep.csv");
  const auto records = rispm::read_sweep_csv(csv);
  CHECK(records.size() == 4);
  CHECK(records[0].symbol_count == 2);
  CHECK(slurp(out / "sweep_table.csv").rfind("tau,N=4,N=8\n", 0) == 0);
  const auto echo = nlohmann::json::parse(slurp(out / "sweep.json"));
  CHECK(echo["config"]["sweep"]["symbols"] == 2);
}

TEST_CASE("simulate reports per-user error rates") {
  const fs::path out = scratch("simulate");
  const auto r = run({"--mode", "simulate", "--seed", "5", "--out", out.string()});
  CHECK(r.code == 0);
  const std::string csv = slurp(out / "simulate.csv");
  CHECK(csv.rfind("instance,user,p_opt,target,sep,std_error,errors,trials,within_bound\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  CHECK(fs::exists(out / "simulate.json"));
}

TEST_CASE("self-check") {
  const auto clean = run({"--mode", "check"});
  CHECK(clean.code == 0);
  CHECK(clean.out.find("FAIL") == std::string::npos);
  CHECK(std::count(clean.out.begin(), clean.out.end(), '\n') == 5);

  const auto faulty = run({"--mode", "check", "--inject-fault", "grad-sign"});
  CHECK(faulty.code == rispm::cli::kFailure);
  CHECK(faulty.out.find("FAIL gradient f_smooth") != std::string::npos);

  const auto loose = run({"--mode", "check", "--fd-tol", "0.001"});
  CHECK(loose.code == 0);
  CHECK(loose.out.find("(tol 1.0e-03)") != std::string::npos);

  CHECK(run({"--mode", "check", "--inject-fault", "meteor"}).code == rispm::cli::kUsage);
}

TEST_CASE("config round trip") {
  rispm::cli::RunConfig cfg;
  cfg.mode = "sweep";
  cfg.seed = 77;
  cfg.out_dir = "x";
  cfg.targets = {1e-2, 1e-3};
  cfg.bisection.rcg.beta_rule = rispm::BetaRule::FletcherReeves;
  cfg.sweep.averaging = rispm::Averaging::MeanOfDb;
  const auto back = rispm::cli::config_from_json(rispm::cli::config_to_json(cfg));
  CHECK(back.mode == "sweep");
  CHECK(back.seed == 77);
  CHECK(back.targets == cfg.targets);
  CHECK(back.bisection.rcg.beta_rule == rispm::BetaRule::FletcherReeves);
  CHECK(back.sweep.averaging == rispm::Averaging::MeanOfDb);
  CHECK(rispm::cli::config_to_json(back) == rispm::cli::config_to_json(cfg));
}

}
