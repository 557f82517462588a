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

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>
#include <doctest.h>

#include "rispm/simulate.hpp"
#include "rispm/solver.hpp"

using rispm::BisectionConfig;
using rispm::Instance;

namespace {

const rispm::PskConstellation kQpsk(4);

Instance single_element(double target) {
  return Instance{rispm::ChannelSet::all_ones(1, 1, 1.0), rispm::SymbolVector({0}, kQpsk), kQpsk,
                  {target}};
}

double closed_form_power(double target) {
  const double inv = boost::math::erfc_inv(target);
  // d1 = d2 = sqrt(P) sin(pi/4) at the optimum, so the bound is erfc(sqrt(P/2))
  return 2.0 * inv * inv;
}

Instance with_targets(const Instance& base, double target) {
  Instance copy = base;
  copy.targets.assign(copy.targets.size(), target);
  return copy;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("bisection config validation") {
  BisectionConfig c;
  CHECK_NOTHROW(c.validate());
  c.p_upper = c.p_lower;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.eps_tol = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.i_max = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  Instance bad = single_element(1e-3);
  bad.targets = {1e-3, 1e-3};
  CHECK_THROWS_AS(rispm::bisect(bad, BisectionConfig{}), std::invalid_argument);
}

TEST_CASE("initialization point") {
  SUBCASE("single element") {
    rispm::RotatedChannels rc{{rispm::CVector::Ones(1)}};
    const auto dirs = rispm::build_direction_matrices(rc, std::numbers::pi / 4);
    const auto p = rispm::initialize_point(dirs, rispm::RcgConfig::initialization_defaults(), 3);
    double grid = -1e300;
    for (int i = 0; i < 10000; ++i) {
      const double psi = -std::numbers::pi + 2.0 * std::numbers::pi * i / 10000;
      grid = std::max(grid, rispm::min_trace(
                                rispm::PhasePoint::from_phases(Eigen::VectorXd::Constant(1, psi)).matrix(), dirs));
    }
    CHECK(rispm::min_trace(p.matrix(), dirs) == doctest::Approx(std::sin(std::numbers::pi / 4)).epsilon(1e-4));
    CHECK(rispm::min_trace(p.matrix(), dirs) == doctest::Approx(grid).epsilon(1e-4));
  }
  SUBCASE("eight identical elements") {
    rispm::RotatedChannels rc{{rispm::CVector::Ones(8)}};
    const auto dirs = rispm::build_direction_matrices(rc, std::numbers::pi / 4);
    const auto p = rispm::initialize_point(dirs, rispm::RcgConfig::initialization_defaults(), 4);
    // by symmetry the best common phase is optimal; grid over it
    double grid = -1e300;
    for (int i = 0; i < 10000; ++i) {
      const double psi = -std::numbers::pi + 2.0 * std::numbers::pi * i / 10000;
      grid = std::max(grid, rispm::min_trace(
                                rispm::PhasePoint::from_phases(Eigen::VectorXd::Constant(8, psi)).matrix(), dirs));
    }
    CHECK(rispm::min_trace(p.matrix(), dirs) == doctest::Approx(grid).epsilon(1e-4));
    CHECK(rispm::manifold_defect(p.matrix()) <= 1e-12);
  }
}

TEST_CASE("feasibility oracle") {
  SUBCASE("zero power is infeasible") {
    std::mt19937_64 rng(1);
    const Instance inst = rispm::random_instance(6, 3, kQpsk, 1e-2, 1.0, 5);
    const auto dirs = rispm::make_directions(inst);
    const rispm::FeasibilityProblem p(dirs, {1e-2, 3e-3, 1e-3}, 0.0, 1.0);
    const auto r = rispm::feasibility_oracle(p, rispm::PhasePoint::random(6, rng), rispm::RcgConfig{});
    CHECK_FALSE(r.feasible);
    CHECK(r.f_value == doctest::Approx(1.0 - 1e-3));
  }
  SUBCASE("closed form on both sides of the threshold") {
    const Instance inst = single_element(1e-3);
    const auto dirs = rispm::make_directions(inst);
    const auto start = rispm::initialize_point(*dirs, rispm::RcgConfig::initialization_defaults(), 0);
    const rispm::FeasibilityProblem below(dirs, {1e-3}, 10.5, 1.0);
    const rispm::FeasibilityProblem above(dirs, {1e-3}, 11.0, 1.0);
    CHECK(closed_form_power(1e-3) == doctest::Approx(10.8276).epsilon(1e-5));
    CHECK_FALSE(rispm::feasibility_oracle(below, start, rispm::RcgConfig{}).feasible);
    CHECK(rispm::feasibility_oracle(above, start, rispm::RcgConfig{}).feasible);
  }
  SUBCASE("huge power") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Instance inst = rispm::random_instance(30, 5, kQpsk, 1e-2, 1.0, seed);
      const auto dirs = rispm::make_directions(inst);
      const auto start = rispm::initialize_point(*dirs, rispm::RcgConfig::initialization_defaults(), seed);
      REQUIRE(rispm::min_trace(start.matrix(), *dirs) > 0.0);
      const rispm::FeasibilityProblem p(dirs, inst.targets, 1e6, 1.0);
      CHECK(rispm::feasibility_oracle(p, start, rispm::RcgConfig{}).feasible);
    }
  }
}

TEST_CASE("closed-form bisection") {
  BisectionConfig cfg;
  cfg.eps_tol = 1e-4;
  const auto r = rispm::bisect(single_element(1e-3), cfg);
  CHECK(r.feasible);
  CHECK(std::abs(r.p_opt - closed_form_power(1e-3)) <= 1e-3);
  CHECK(r.p_n_db == doctest::Approx(10.0 * std::log10(r.p_opt)));
  for (double target : {1e-2, 1e-5, 1e-8}) {
    const auto s = rispm::bisect(single_element(target), cfg);
    CHECK(s.p_opt == doctest::Approx(closed_form_power(target)).epsilon(1e-4));
  }
}

TEST_CASE("bracket invariants and returned feasibility") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Instance inst = rispm::random_instance(16, 3, kQpsk, 1e-3, 1.0, seed);
    BisectionConfig cfg;
    cfg.init_seed = seed;
    const auto r = rispm::bisect(inst, cfg);
    REQUIRE(r.feasible);
    REQUIRE(r.trace.size() >= 2);
    CHECK(r.trace.front().branch == rispm::Branch::Probe);
    double lo = cfg.p_lower;
    double hi = r.trace.front().power;
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
      const auto& e = r.trace[i];
      CHECK(e.power == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-15));
      const double width = hi - lo;
      if (e.branch == rispm::Branch::Feasible) {
        CHECK(e.f_value <= 0.0);
        hi = e.power;
      } else {
        CHECK(e.f_value > 0.0);
        lo = e.power;
      }
      CHECK(hi - lo == doctest::Approx(0.5 * width));
    }
    CHECK(r.p_opt == hi);
    CHECK(hi - lo <= cfg.eps_tol);
    CHECK(r.iterations == static_cast<int>(r.trace.size()) - 1);

    const auto dirs = rispm::make_directions(inst);
    const rispm::FeasibilityProblem p(dirs, inst.targets, r.p_opt, inst.channels.noise_std());
    CHECK(rispm::f_max(rispm::PhasePoint::from_complex(r.theta_opt).matrix(), p) <= 0.0);
  }
}

TEST_CASE("looser targets never need more power") {
  const Instance base = rispm::random_instance(12, 3, kQpsk, 1e-3, 1.0, 7);
  BisectionConfig cfg;
  cfg.eps_tol = 1e-6;
  CHECK(rispm::bisect(with_targets(base, 0.49), cfg).p_opt <=
        rispm::bisect(with_targets(base, 1e-3), cfg).p_opt);
  double prev = 0.0;
  for (double tau : {1.0, 2.0, 3.0, 5.0, 8.0}) {
    const double p = rispm::bisect(with_targets(base, std::pow(10.0, -tau)), cfg).p_opt;
    CHECK(p >= prev * (1.0 - 1e-6));
    prev = p;
  }
}

TEST_CASE("doubling the channel divides the power by four") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Instance inst = rispm::random_instance(10, 3, kQpsk, 1e-3, 1.0, seed);
    std::vector<rispm::CVector> users;
    for (int k = 0; k < inst.users(); ++k) users.push_back(inst.channels.user(k));
    Instance scaled = inst;
    scaled.channels = rispm::ChannelSet(2.0 * inst.channels.generator(), users, 1.0);
    BisectionConfig cfg;
    cfg.eps_tol = 1e-9;
    cfg.init_seed = seed;
    const double p1 = rispm::bisect(inst, cfg).p_opt;
    const double p2 = rispm::bisect(scaled, cfg).p_opt;
    CHECK(p2 == doctest::Approx(p1 / 4.0).epsilon(2e-3));
  }
}

TEST_CASE("warm start agrees with cold start") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Instance inst = rispm::random_instance(20, 4, kQpsk, 1e-3, 1.0, seed);
    BisectionConfig warm;
    warm.init_seed = seed;
    BisectionConfig cold = warm;
    cold.warm_start = false;
    const double pw = rispm::bisect(inst, warm).p_opt;
    const double pc = rispm::bisect(inst, cold).p_opt;
    CHECK(pw == doctest::Approx(pc).epsilon(0.02));
  }
}

TEST_CASE("infeasible bracket") {
  BisectionConfig cfg;
  cfg.p_upper = 1.0;
  cfg.bracket_doublings = 0;
  const auto r = rispm::bisect(single_element(1e-3), cfg);
  CHECK_FALSE(r.feasible);
  CHECK(r.trace.size() == 1);

  cfg.bracket_doublings = 4;
  // 1, 2, 4, 8, 16: the last doubling brackets the threshold
  const auto repaired = rispm::bisect(single_element(1e-3), cfg);
  CHECK(repaired.feasible);
  CHECK(repaired.p_opt == doctest::Approx(closed_form_power(1e-3)).epsilon(1e-5));
}

TEST_CASE("solve CSV row") {
  std::ostringstream os;
  rispm::write_solve_csv_header(os);
  rispm::write_solve_csv_row(os, {3, 30, 5, 4, 2.0, 0.5, -3.0, 12, true});
  CHECK(os.str() == "seed,N,K,alpha_s,tau,p_opt,p_n_db,iterations,feasible\n3,30,5,4,2,0.5,-3,12,1\n");
}

}
