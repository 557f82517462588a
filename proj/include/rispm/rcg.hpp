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

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "rispm/manifold.hpp"

namespace rispm {

enum class BetaRule { PolakRibierePlus, FletcherReeves, SteepestDescent };

std::string_view to_string(BetaRule rule);
BetaRule parse_beta_rule(std::string_view name);

struct RcgConfig {
  int max_iters = 500;
  /// Stop once the Riemannian gradient norm is at or below this.
  double grad_tol = 1e-8;
  double armijo_c1 = 1e-4;
  double backtrack_factor = 0.5;
  /// Length (Frobenius) of the first trial displacement. Later trials start
  /// at twice the previously accepted displacement.
  double initial_step = 1.0;
  int max_backtracks = 50;
  BetaRule beta_rule = BetaRule::PolakRibierePlus;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;

  static RcgConfig feasibility_defaults();
  static RcgConfig initialization_defaults();
};

enum class Termination { GradientTolerance, MaxIterations, LineSearchFailure };

std::string_view to_string(Termination t);

struct RcgReport {
  PhasePoint final_point;
  double final_value = 0.0;
  double final_grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  Termination termination = Termination::MaxIterations;
  /// Value at the start point followed by the value after each accepted step.
  std::vector<double> value_trace;
  std::vector<double> grad_norm_trace;
  /// Times the conjugate direction was discarded for steepest descent.
  int direction_resets = 0;
};

/// Raised when the objective produces a non-finite value or gradient.
class ObjectiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Returns f(theta); writes the Euclidean gradient when `egrad` is non-null.
using Objective = std::function<double(const RealMatrix2X& theta, RealMatrix2X* egrad)>;

/// Called at the start point (iteration 0) and after every accepted step.
using IterateObserver =
    std::function<void(int iteration, const PhasePoint& point, double value, double grad_norm)>;

/// Riemannian conjugate gradient on the oblique manifold with Armijo
/// backtracking. Deterministic given the start point.
RcgReport minimize(const Objective& objective, const PhasePoint& start, const RcgConfig& config,
                   const IterateObserver& observer = {});

/// Polak-Ribiere coefficient <g, g - g_prev> / <g_prev, g_prev>, clamped at
/// zero. `g_prev` must already be transported to the tangent space of `g`.
double polak_ribiere_plus(const oblique::TangentVector& g, const oblique::TangentVector& g_prev,
                          double g_prev_sq_norm);

/// CSV with header `iteration,value,grad_norm`.
void write_trace_csv(std::ostream& os, const RcgReport& report);

}  // namespace rispm
