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

#include "rispm/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <fmt/core.h>

namespace rispm {

namespace {

void check_shape(const RealMatrix2X& theta, const DirectionMatrices& directions) {
  if (theta.cols() != directions.elements()) {
    throw std::invalid_argument(fmt::format("point has {} columns, directions have {} elements",
                                            theta.cols(), directions.elements()));
  }
}

}  // namespace

FeasibilityProblem::FeasibilityProblem(std::shared_ptr<const DirectionMatrices> directions,
                                       std::vector<double> targets, double power, double noise_std)
    : directions_(std::move(directions)),
      targets_(std::move(targets)),
      power_(power),
      noise_std_(noise_std) {
  if (!directions_ || directions_->users() == 0) {
    throw std::invalid_argument("feasibility problem needs direction matrices");
  }
  if (static_cast<int>(targets_.size()) != directions_->users()) {
    throw std::invalid_argument(fmt::format("{} SEP targets for {} users", targets_.size(),
                                            directions_->users()));
  }
  for (double p : targets_) {
    if (!(p > 0.0 && p < 0.5)) {
      throw std::invalid_argument(fmt::format("SEP target {} outside (0, 0.5)", p));
    }
  }
  if (!(power_ >= 0.0) || !std::isfinite(power_)) {
    throw std::invalid_argument(fmt::format("power must be finite and >= 0, got {}", power_));
  }
  if (!(noise_std_ > 0.0)) {
    throw std::invalid_argument(fmt::format("noise std must be positive, got {}", noise_std_));
  }
}

FeasibilityProblem FeasibilityProblem::with_power(double power) const {
  return FeasibilityProblem(directions_, targets_, power, noise_std_);
}

double FeasibilityProblem::snr_amplitude() const { return std::sqrt(power_) / noise_std_; }

double log_sum_exp(std::span<const double> x) {
  if (x.empty()) {
    return -std::numeric_limits<double>::infinity();
  }
  const double m = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(m)) {
    return m;
  }
  double acc = 0.0;
  for (double v : x) {
    acc += std::exp(v - m);
  }
  return m + std::log(acc);
}

double constraint_g(int k, const RealMatrix2X& theta, const FeasibilityProblem& problem) {
  const auto& dir = problem.directions();
  check_shape(theta, dir);
  const auto idx = static_cast<std::size_t>(k);
  const double c = problem.snr_amplitude();
  const double t1 = trace_product(theta, dir.u1.at(idx));
  const double t2 = trace_product(theta, dir.u2.at(idx));
  return 0.5 * std::erfc(c * t1) + 0.5 * std::erfc(c * t2) - problem.targets()[idx];
}

std::vector<double> constraints(const RealMatrix2X& theta, const FeasibilityProblem& problem) {
  std::vector<double> g(static_cast<std::size_t>(problem.users()));
  for (int k = 0; k < problem.users(); ++k) {
    g[static_cast<std::size_t>(k)] = constraint_g(k, theta, problem);
  }
  return g;
}

double f_max(const RealMatrix2X& theta, const FeasibilityProblem& problem) {
  const auto g = constraints(theta, problem);
  return *std::max_element(g.begin(), g.end());
}

namespace {

// Shared by the value-only and value+gradient entry points so both return
// bit-identical values.
double smooth_eval(const RealMatrix2X& theta, const FeasibilityProblem& problem,
                   RealMatrix2X* grad) {
  const auto& dir = problem.directions();
  check_shape(theta, dir);
  const auto users = static_cast<std::size_t>(problem.users());
  const double c = problem.snr_amplitude();
  const double slope = c / std::sqrt(std::numbers::pi);

  std::vector<double> g(users);
  std::vector<double> x1(users);
  std::vector<double> x2(users);
  for (std::size_t k = 0; k < users; ++k) {
    x1[k] = c * trace_product(theta, dir.u1[k]);
    x2[k] = c * trace_product(theta, dir.u2[k]);
    g[k] = 0.5 * std::erfc(x1[k]) + 0.5 * std::erfc(x2[k]) - problem.targets()[k];
  }
  const double m = *std::max_element(g.begin(), g.end());
  double weight_sum = 0.0;
  for (std::size_t k = 0; k < users; ++k) {
    weight_sum += std::exp(g[k] - m);
  }
  if (grad != nullptr) {
    grad->setZero(2, theta.cols());
    for (std::size_t k = 0; k < users; ++k) {
      // d/dx 0.5 erfc(x) = -exp(-x^2)/sqrt(pi); exp underflow to 0 is fine
      const double w = std::exp(g[k] - m) * slope / weight_sum;
      const double e1 = w * std::exp(-x1[k] * x1[k]);
      const double e2 = w * std::exp(-x2[k] * x2[k]);
      grad->noalias() -= e1 * dir.u1[k].transpose() + e2 * dir.u2[k].transpose();
    }
  }
  return m + std::log(weight_sum);
}

double init_eval(const RealMatrix2X& theta, const DirectionMatrices& directions,
                 RealMatrix2X* grad) {
  check_shape(theta, directions);
  const auto users = static_cast<std::size_t>(directions.users());
  std::vector<double> neg(2 * users);
  for (std::size_t k = 0; k < users; ++k) {
    neg[2 * k] = -trace_product(theta, directions.u1[k]);
    neg[2 * k + 1] = -trace_product(theta, directions.u2[k]);
  }
  const double m = *std::max_element(neg.begin(), neg.end());
  double weight_sum = 0.0;
  for (double v : neg) {
    weight_sum += std::exp(v - m);
  }
  if (grad != nullptr) {
    grad->setZero(2, theta.cols());
    for (std::size_t k = 0; k < users; ++k) {
      const double w1 = std::exp(neg[2 * k] - m) / weight_sum;
      const double w2 = std::exp(neg[2 * k + 1] - m) / weight_sum;
      grad->noalias() -= w1 * directions.u1[k].transpose() + w2 * directions.u2[k].transpose();
    }
  }
  return m + std::log(weight_sum);
}

}  // namespace

double f_smooth(const RealMatrix2X& theta, const FeasibilityProblem& problem) {
  return smooth_eval(theta, problem, nullptr);
}

double f_smooth_with_grad(const RealMatrix2X& theta, const FeasibilityProblem& problem,
                          RealMatrix2X& grad) {
  return smooth_eval(theta, problem, &grad);
}

RealMatrix2X f_smooth_grad(const RealMatrix2X& theta, const FeasibilityProblem& problem) {
  RealMatrix2X grad;
  smooth_eval(theta, problem, &grad);
  return grad;
}

double v_init_with_grad(const RealMatrix2X& theta, const DirectionMatrices& directions,
                        RealMatrix2X& grad) {
  return init_eval(theta, directions, &grad);
}

double v_init(const RealMatrix2X& theta, const DirectionMatrices& directions) {
  return init_eval(theta, directions, nullptr);
}

RealMatrix2X v_init_grad(const RealMatrix2X& theta, const DirectionMatrices& directions) {
  RealMatrix2X grad;
  init_eval(theta, directions, &grad);
  return grad;
}

double min_trace(const RealMatrix2X& theta, const DirectionMatrices& directions) {
  check_shape(theta, directions);
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < directions.u1.size(); ++k) {
    lo = std::min({lo, trace_product(theta, directions.u1[k]),
                   trace_product(theta, directions.u2[k])});
  }
  return lo;
}

}  // namespace rispm
