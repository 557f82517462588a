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

#include "rispm/rcg.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

#include <fmt/core.h>
#include <fmt/ostream.h>

namespace rispm {

using oblique::TangentVector;

std::string_view to_string(BetaRule rule) {
  switch (rule) {
    case BetaRule::PolakRibierePlus:
      return "pr+";
    case BetaRule::FletcherReeves:
      return "fr";
    case BetaRule::SteepestDescent:
      return "sd";
  }
  return "?";
}

BetaRule parse_beta_rule(std::string_view name) {
  if (name == "pr+") return BetaRule::PolakRibierePlus;
  if (name == "fr") return BetaRule::FletcherReeves;
  if (name == "sd") return BetaRule::SteepestDescent;
  throw std::invalid_argument(fmt::format("unknown beta rule '{}' (expected pr+, fr or sd)", name));
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::GradientTolerance:
      return "gradient_tolerance";
    case Termination::MaxIterations:
      return "max_iterations";
    case Termination::LineSearchFailure:
      return "line_search_failure";
  }
  return "?";
}

void RcgConfig::validate() const {
  if (max_iters < 0) {
    throw std::invalid_argument(fmt::format("max_iters must be >= 0, got {}", max_iters));
  }
  if (!(grad_tol > 0.0)) {
    throw std::invalid_argument(fmt::format("grad_tol must be > 0, got {}", grad_tol));
  }
  if (!(armijo_c1 > 0.0 && armijo_c1 < 1.0)) {
    throw std::invalid_argument(fmt::format("armijo_c1 must be in (0, 1), got {}", armijo_c1));
  }
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw std::invalid_argument(
        fmt::format("backtrack_factor must be in (0, 1), got {}", backtrack_factor));
  }
  if (!(initial_step > 0.0) || !std::isfinite(initial_step)) {
    throw std::invalid_argument(fmt::format("initial_step must be > 0, got {}", initial_step));
  }
  if (max_backtracks < 1) {
    throw std::invalid_argument(fmt::format("max_backtracks must be >= 1, got {}", max_backtracks));
  }
}

RcgConfig RcgConfig::feasibility_defaults() { return RcgConfig{}; }

RcgConfig RcgConfig::initialization_defaults() {
  RcgConfig cfg;
  cfg.max_iters = 200;
  return cfg;
}

double polak_ribiere_plus(const TangentVector& g, const TangentVector& g_prev,
                          double g_prev_sq_norm) {
  if (!(g_prev_sq_norm > 0.0)) {
    return 0.0;
  }
  const double beta = (oblique::inner(g, g) - oblique::inner(g, g_prev)) / g_prev_sq_norm;
  return std::max(0.0, beta);
}

namespace {

struct Evaluation {
  double value;
  TangentVector grad;
  double grad_norm;
};

Evaluation evaluate(const Objective& objective, const PhasePoint& x) {
  RealMatrix2X egrad;
  const double value = objective(x.matrix(), &egrad);
  if (!std::isfinite(value)) {
    throw ObjectiveError(fmt::format("objective returned non-finite value {}", value));
  }
  if (egrad.cols() != x.elements() || !egrad.allFinite()) {
    throw ObjectiveError("objective returned a malformed or non-finite gradient");
  }
  TangentVector grad = oblique::project_tangent(x, egrad);
  const double n = oblique::norm(grad);
  return {value, std::move(grad), n};
}

struct Accepted {
  PhasePoint point;
  double step;
};

// Armijo backtracking along `dir` from x. `slope` = <grad, dir> < 0.
std::optional<Accepted> line_search(const Objective& objective, const PhasePoint& x, double value,
                                    const TangentVector& dir, double slope, double trial_step,
                                    const RcgConfig& cfg) {
  double t = trial_step;
  for (int attempt = 0; attempt < cfg.max_backtracks; ++attempt, t *= cfg.backtrack_factor) {
    std::optional<PhasePoint> candidate;
    try {
      candidate.emplace(oblique::retract(x, dir, t));
    } catch (const oblique::DegenerateRetraction&) {
      continue;
    }
    const double f = objective(candidate->matrix(), nullptr);
    if (!std::isfinite(f)) {
      throw ObjectiveError(fmt::format("objective returned non-finite value {} in line search", f));
    }
    if (f <= value + cfg.armijo_c1 * t * slope) {
      return Accepted{std::move(*candidate), t};
    }
  }
  return std::nullopt;
}

}  // namespace

RcgReport minimize(const Objective& objective, const PhasePoint& start, const RcgConfig& config,
                   const IterateObserver& observer) {
  config.validate();

  PhasePoint x = start;
  Evaluation current = evaluate(objective, x);

  RcgReport report{x, current.value, current.grad_norm, 0, false, Termination::MaxIterations,
                   {current.value}, {current.grad_norm}, 0};
  if (observer) observer(0, x, current.value, current.grad_norm);

  TangentVector dir{-current.grad.xi};
  double displacement = config.initial_step;

  int iter = 0;
  for (;; ++iter) {
    if (current.grad_norm <= config.grad_tol) {
      report.converged = true;
      report.termination = Termination::GradientTolerance;
      break;
    }
    if (iter >= config.max_iters) {
      report.termination = Termination::MaxIterations;
      break;
    }

    double slope = oblique::inner(current.grad, dir);
    bool steepest = false;
    if (!(slope < 0.0)) {
      dir.xi = -current.grad.xi;
      slope = -current.grad_norm * current.grad_norm;
      steepest = true;
      ++report.direction_resets;
    }

    double dir_norm = oblique::norm(dir);
    auto accepted = line_search(objective, x, current.value, dir, slope, displacement / dir_norm,
                                config);
    if (!accepted && !steepest) {
      // one retry along the negative gradient before giving up
      dir.xi = -current.grad.xi;
      slope = -current.grad_norm * current.grad_norm;
      dir_norm = current.grad_norm;
      ++report.direction_resets;
      accepted = line_search(objective, x, current.value, dir, slope, displacement / dir_norm,
                             config);
    }
    if (!accepted) {
      report.termination = Termination::LineSearchFailure;
      break;
    }

    displacement = 2.0 * accepted->step * dir_norm;
    PhasePoint next = std::move(accepted->point);
    Evaluation next_eval = evaluate(objective, next);

    double beta = 0.0;
    const TangentVector prev_grad = oblique::transport(next, current.grad);
    switch (config.beta_rule) {
      case BetaRule::PolakRibierePlus: {
        const double sq = current.grad_norm * current.grad_norm;
        beta = polak_ribiere_plus(next_eval.grad, prev_grad, sq);
        if (beta == 0.0) ++report.direction_resets;
        break;
      }
      case BetaRule::FletcherReeves:
        beta = (next_eval.grad_norm * next_eval.grad_norm) /
               (current.grad_norm * current.grad_norm);
        break;
      case BetaRule::SteepestDescent:
        beta = 0.0;
        break;
    }
    const TangentVector carried = oblique::transport(next, dir);
    dir.xi = -next_eval.grad.xi + beta * carried.xi;

    x = std::move(next);
    current = std::move(next_eval);
    report.value_trace.push_back(current.value);
    report.grad_norm_trace.push_back(current.grad_norm);
    if (observer) observer(iter + 1, x, current.value, current.grad_norm);
  }

  report.final_point = x;
  report.final_value = current.value;
  report.final_grad_norm = current.grad_norm;
  report.iterations = iter;
  return report;
}

void write_trace_csv(std::ostream& os, const RcgReport& report) {
  os << "iteration,value,grad_norm\n";
  for (std::size_t i = 0; i < report.value_trace.size(); ++i) {
    fmt::print(os, "{},{},{}\n", i, report.value_trace[i], report.grad_norm_trace[i]);
  }
}

}  // namespace rispm
