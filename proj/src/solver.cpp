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

#include "rispm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>
#include <utility>

#include <fmt/core.h>
#include <fmt/ostream.h>

namespace rispm {

void BisectionConfig::validate() const {
  if (!(p_lower >= 0.0) || !(p_upper > p_lower) || !std::isfinite(p_upper)) {
    throw std::invalid_argument(
        fmt::format("invalid power bracket [{}, {}]: need 0 <= lower < upper", p_lower, p_upper));
  }
  if (!(eps_tol > 0.0)) {
    throw std::invalid_argument(fmt::format("eps_tol must be > 0, got {}", eps_tol));
  }
  if (i_max < 1) {
    throw std::invalid_argument(fmt::format("i_max must be >= 1, got {}", i_max));
  }
  if (bracket_doublings < 0) {
    throw std::invalid_argument("bracket_doublings must be >= 0");
  }
  rcg.validate();
  rcg_init.validate();
}

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::Probe:
      return "probe";
    case Branch::Feasible:
      return "feasible";
    case Branch::Infeasible:
      return "infeasible";
  }
  return "?";
}

std::shared_ptr<const DirectionMatrices> make_directions(const Instance& instance) {
  const RotatedChannels rotated = rotate(instance.channels, instance.symbols, instance.constellation);
  return std::make_shared<const DirectionMatrices>(
      build_direction_matrices(rotated, instance.constellation.half_angle()));
}

PhasePoint initialize_point(const DirectionMatrices& directions, const RcgConfig& config,
                            const PhasePoint& start) {
  const Objective v0 = [&directions](const RealMatrix2X& theta, RealMatrix2X* egrad) {
    return egrad ? v_init_with_grad(theta, directions, *egrad) : v_init(theta, directions);
  };
  return minimize(v0, start, config).final_point;
}

PhasePoint initialize_point(const DirectionMatrices& directions, const RcgConfig& config,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return initialize_point(directions, config, PhasePoint::random(directions.elements(), rng));
}

OracleResult feasibility_oracle(const FeasibilityProblem& problem, const PhasePoint& start,
                                const RcgConfig& config) {
  const Objective f0 = [&problem](const RealMatrix2X& theta, RealMatrix2X* egrad) {
    return egrad ? f_smooth_with_grad(theta, problem, *egrad) : f_smooth(theta, problem);
  };
  // The smoothed objective and its gradient scale with the SEP targets, so
  // the gradient tolerance is taken relative to the strictest target.
  RcgConfig scaled = config;
  const auto& targets = problem.targets();
  scaled.grad_tol = config.grad_tol * *std::min_element(targets.begin(), targets.end());
  try {
    RcgReport report = minimize(f0, start, scaled);
    const double f = f_max(report.final_point.matrix(), problem);
    return OracleResult{f <= 0.0, std::move(report.final_point), f, report.iterations, {}};
  } catch (const ObjectiveError& e) {
    return OracleResult{false, start, f_max(start.matrix(), problem), 0, e.what()};
  }
}

double normalized_power_db(double power, double noise_var) {
  return 10.0 * std::log10(power / noise_var);
}

SolveResult bisect(const Instance& instance, const BisectionConfig& config) {
  config.validate();
  if (static_cast<int>(instance.targets.size()) != instance.users()) {
    throw std::invalid_argument(fmt::format("{} SEP targets for {} users", instance.targets.size(),
                                            instance.users()));
  }
  const auto directions = make_directions(instance);
  const double noise_var = instance.channels.noise_var();
  const FeasibilityProblem base(directions, instance.targets, config.p_upper,
                                instance.channels.noise_std());

  const PhasePoint initial = initialize_point(*directions, config.rcg_init, config.init_seed);

  SolveResult result;
  double lower = config.p_lower;
  double upper = config.p_upper;

  OracleResult probe = feasibility_oracle(base, initial, config.rcg);
  result.trace.push_back({upper, probe.f_value, Branch::Probe});
  for (int d = 0; !probe.feasible && d < config.bracket_doublings; ++d) {
    lower = upper;
    upper *= 2.0;
    probe = feasibility_oracle(base.with_power(upper), config.warm_start ? probe.theta : initial,
                               config.rcg);
    result.trace.push_back({upper, probe.f_value, Branch::Probe});
  }
  if (!probe.feasible) {
    result.feasible = false;
    result.p_opt = upper;
    result.theta_opt = probe.theta.to_complex();
    result.p_n_db = normalized_power_db(upper, noise_var);
    return result;
  }

  PhasePoint certified = std::move(probe.theta);
  int iterations = 0;
  while (upper - lower > config.eps_tol && iterations < config.i_max) {
    const double mid = 0.5 * (upper + lower);
    OracleResult r =
        feasibility_oracle(base.with_power(mid), config.warm_start ? certified : initial, config.rcg);
    ++iterations;
    if (r.feasible) {
      upper = mid;
      certified = std::move(r.theta);
      result.trace.push_back({mid, r.f_value, Branch::Feasible});
    } else {
      lower = mid;
      result.trace.push_back({mid, r.f_value, Branch::Infeasible});
    }
  }

  result.feasible = true;
  result.p_opt = upper;
  result.theta_opt = certified.to_complex();
  result.iterations = iterations;
  result.p_n_db = normalized_power_db(upper, noise_var);
  return result;
}

void write_solve_csv_header(std::ostream& os) {
  os << "seed,N,K,alpha_s,tau,p_opt,p_n_db,iterations,feasible\n";
}

void write_solve_csv_row(std::ostream& os, const SolveRow& row) {
  fmt::print(os, "{},{},{},{},{},{},{},{},{}\n", row.seed, row.elements, row.users, row.order,
             row.tau, row.p_opt, row.p_n_db, row.iterations, row.feasible ? 1 : 0);
}

}  // namespace rispm
