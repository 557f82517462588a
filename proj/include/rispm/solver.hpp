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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "rispm/channel.hpp"
#include "rispm/constellation.hpp"
#include "rispm/objective.hpp"
#include "rispm/rcg.hpp"

namespace rispm {

struct BisectionConfig {
  double p_lower = 0.0;
  double p_upper = 100.0;
  double eps_tol = 1e-7;
  int i_max = 100;
  /// Times the upper bracket is doubled when the first probe at p_upper is
  /// infeasible. 0 gives the strict behaviour (report infeasible at once).
  int bracket_doublings = 4;
  /// Start each feasibility solve from the last certified-feasible point
  /// instead of the initialization point.
  bool warm_start = true;
  /// Seeds the random start of the initialization solve.
  std::uint64_t init_seed = 0;
  RcgConfig rcg = RcgConfig::feasibility_defaults();
  RcgConfig rcg_init = RcgConfig::initialization_defaults();

  void validate() const;
};

/// One transmission problem: channels, the symbols to convey, and per-user
/// SEP targets.
struct Instance {
  ChannelSet channels;
  SymbolVector symbols;
  PskConstellation constellation;
  std::vector<double> targets;

  int elements() const { return channels.elements(); }
  int users() const { return channels.users(); }
};

/// Direction matrices of an instance, shared by every feasibility problem built from it.
std::shared_ptr<const DirectionMatrices> make_directions(const Instance& instance);

struct OracleResult {
  bool feasible = false;
  PhasePoint theta;
  /// max_k g_k at theta (the exact max, not the smoothed value).
  double f_value = 0.0;
  int rcg_iterations = 0;
  /// Empty unless the inner solve aborted.
  std::string diagnostic;
};

enum class Branch { Probe, Feasible, Infeasible };
std::string_view to_string(Branch b);

struct TraceEntry {
  double power;
  double f_value;
  Branch branch;
};

struct SolveResult {
  /// Smallest certified-feasible power found (the final upper bracket).
  double p_opt = 0.0;
  CVector theta_opt;
  bool feasible = false;
  /// Bisection midpoints evaluated (probes excluded).
  int iterations = 0;
  std::vector<TraceEntry> trace;
  /// 10 log10(p_opt / noise_var)
  double p_n_db = 0.0;
};

/// Minimizes the smoothed max-min-trace surrogate from a random start; the
/// result lies in the convexity region whenever that region meets the manifold
/// and the solve succeeds.
PhasePoint initialize_point(const DirectionMatrices& directions, const RcgConfig& config,
                            std::uint64_t seed);
PhasePoint initialize_point(const DirectionMatrices& directions, const RcgConfig& config,
                            const PhasePoint& start);

/// Minimizes the smoothed objective from `start` and classifies the result
/// with the exact max-form constraint.
OracleResult feasibility_oracle(const FeasibilityProblem& problem, const PhasePoint& start,
                                const RcgConfig& config);

/// Bisection over power. Throws std::invalid_argument on a bad configuration.
SolveResult bisect(const Instance& instance, const BisectionConfig& config);

/// 10 log10(power / noise_var)
double normalized_power_db(double power, double noise_var);

/// One solve, as written to CSV.
struct SolveRow {
  std::uint64_t seed = 0;
  int elements = 0;
  int users = 0;
  int order = 0;
  double tau = 0.0;
  double p_opt = 0.0;
  double p_n_db = 0.0;
  int iterations = 0;
  bool feasible = false;
};

void write_solve_csv_header(std::ostream& os);
void write_solve_csv_row(std::ostream& os, const SolveRow& row);

}  // namespace rispm
