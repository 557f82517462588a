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

#include <memory>
#include <span>
#include <vector>

#include "rispm/geometry.hpp"

namespace rispm {

/// The fixed-power feasibility question: is there a phase point whose
/// union-bound SEP is below target for every user?
///
/// Per-user constraint:
///   g_k(Theta) = sum_{v=1,2} 0.5 erfc( sqrt(P)/sigma * trace(Theta U_v[k]) ) - p_k
/// The problem is feasible at Theta iff max_k g_k(Theta) <= 0.
///
/// All functions below take ambient 2 x N matrices so that they can be probed
/// off the manifold (finite differences); callers solving the problem pass
/// manifold points.
class FeasibilityProblem {
 public:
  FeasibilityProblem(std::shared_ptr<const DirectionMatrices> directions,
                     std::vector<double> targets, double power, double noise_std);

  /// Same directions and targets at another power.
  FeasibilityProblem with_power(double power) const;

  const DirectionMatrices& directions() const { return *directions_; }
  const std::shared_ptr<const DirectionMatrices>& shared_directions() const { return directions_; }
  const std::vector<double>& targets() const { return targets_; }
  double power() const { return power_; }
  double noise_std() const { return noise_std_; }
  int users() const { return directions_->users(); }
  int elements() const { return directions_->elements(); }

  /// sqrt(P) / sigma_w, the factor in front of every trace inside erfc.
  double snr_amplitude() const;

 private:
  std::shared_ptr<const DirectionMatrices> directions_;
  std::vector<double> targets_;
  double power_;
  double noise_std_;
};

/// log(sum exp(x)), computed as m + log(sum exp(x - m)).
double log_sum_exp(std::span<const double> x);

double constraint_g(int k, const RealMatrix2X& theta, const FeasibilityProblem& problem);

/// Every g_k at once.
std::vector<double> constraints(const RealMatrix2X& theta, const FeasibilityProblem& problem);

/// max_k g_k; <= 0 means feasible.
double f_max(const RealMatrix2X& theta, const FeasibilityProblem& problem);

/// Smooth surrogate log(sum_k exp(g_k)). Satisfies f_max <= f_smooth <= f_max + log K.
double f_smooth(const RealMatrix2X& theta, const FeasibilityProblem& problem);

/// Euclidean gradient of f_smooth.
RealMatrix2X f_smooth_grad(const RealMatrix2X& theta, const FeasibilityProblem& problem);

/// Value and Euclidean gradient in one pass.
double f_smooth_with_grad(const RealMatrix2X& theta, const FeasibilityProblem& problem,
                          RealMatrix2X& grad);

/// Initialization objective, a smoothed -min_{k,v} trace(Theta U_v[k]):
///   v0(Theta) = log sum_k ( exp(-trace(Theta U1[k])) + exp(-trace(Theta U2[k])) )
double v_init(const RealMatrix2X& theta, const DirectionMatrices& directions);
RealMatrix2X v_init_grad(const RealMatrix2X& theta, const DirectionMatrices& directions);
double v_init_with_grad(const RealMatrix2X& theta, const DirectionMatrices& directions,
                        RealMatrix2X& grad);

/// min over all users and both boundaries of trace(Theta U_v[k]). A point is
/// in the convexity region of f_max when this is >= 0.
double min_trace(const RealMatrix2X& theta, const DirectionMatrices& directions);

}  // namespace rispm
