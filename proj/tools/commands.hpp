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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rispm/simulate.hpp"

namespace rispm::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;
inline constexpr int kInfeasible = 3;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "RISPM_OUT_DIR";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string mode = "solve";
  std::uint64_t seed = 1;
  std::string out_dir;
  int threads = 0;

  // single instance (solve / simulate)
  int elements = 30;
  int users = 5;
  int order = 4;
  double noise_var = 1.0;
  double tau = 2.0;
  /// Per-user targets; overrides tau when non-empty.
  std::vector<double> targets;
  /// Channel fixture; overrides elements/users when set.
  std::string channel_file;
  /// Explicit symbol indices; random from the seed when empty.
  std::vector<int> symbols;

  BisectionConfig bisection;
  SweepConfig sweep;

  // simulate
  std::int64_t trials = 100000;
  int instances = 1;

  // check
  double fd_tol = 1e-5;
  int check_instances = 10;
  /// Test hook: "grad-sign" flips the analytic gradient inside the checks.
  std::string inject_fault;
};

/// Overlays keys present in `j` onto `base`. Unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
nlohmann::json config_to_json(const RunConfig& cfg);

/// Resolves the output directory: explicit value, then $RISPM_OUT_DIR, then "rispm_out".
std::string resolve_out_dir(const std::string& requested);

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses flags (flags win over the config file) and dispatches on --mode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rispm::cli
