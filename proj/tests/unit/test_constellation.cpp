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
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "rispm/constellation.hpp"

using rispm::cplx;
using rispm::detect;
using rispm::PskConstellation;

TEST_SUITE("constellation") {

TEST_CASE("symbols are unit-modulus and uniformly spaced") {
  for (int order : {2, 3, 4, 8, 16}) {
    const PskConstellation c(order);
    CHECK(c.half_angle() * order == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    REQUIRE(c.symbols().size() == static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) {
      CHECK(std::abs(std::abs(c.symbol(i)) - 1.0) < 1e-12);
      const cplx next = c.symbol((i + 1) % order);
      const double step = std::arg(next / c.symbol(i));
      const double expected = 2.0 * std::numbers::pi / order;
      // arg() wraps to (-pi, pi]; BPSK's step of pi is the only wrap case
      CHECK(std::abs(std::remainder(step - expected, 2.0 * std::numbers::pi)) < 1e-12);
    }
  }
}

TEST_CASE("default offset") {
  CHECK(PskConstellation(4).offset() == doctest::Approx(std::numbers::pi / 4));
  CHECK(PskConstellation(8).offset() == doctest::Approx(std::numbers::pi / 8));
  CHECK(PskConstellation(3).offset() == 0.0);
  CHECK(PskConstellation(4, 0.3).offset() == 0.3);
}

TEST_CASE("invalid construction") {
  CHECK_THROWS_AS(PskConstellation(1), std::invalid_argument);
  CHECK_THROWS_AS(PskConstellation(4, std::nan("")), std::invalid_argument);
  const PskConstellation qpsk(4);
  CHECK_THROWS_AS(rispm::SymbolVector({0, 4}, qpsk), std::out_of_range);
  CHECK_THROWS_AS(rispm::SymbolVector({-1}, qpsk), std::out_of_range);
}

TEST_CASE("detect examples") {
  const PskConstellation qpsk(4);
  CHECK(qpsk.symbol_phase(detect({1.0, 0.1}, qpsk)) == doctest::Approx(std::numbers::pi / 4));

  const PskConstellation bpsk(2, 0.0);
  CHECK(std::abs(bpsk.symbol(detect({-5.0, 0.0}, bpsk)) - cplx(-1.0, 0.0)) < 1e-15);

  // e^{j0} lies between the sectors of e^{j pi/4} (index 0) and e^{-j pi/4} (index 3)
  CHECK(detect({1.0, 0.0}, qpsk) == 0);
  // between index 0 and 1
  CHECK(detect({0.0, 1.0}, qpsk) == 0);
  // between index 1 and 2
  CHECK(detect({-1.0, 0.0}, qpsk) == 1);
  CHECK(detect({0.0, 0.0}, qpsk) == 0);
}

TEST_CASE("detect is scale invariant") {
  for (int order : {2, 4, 8}) {
    const PskConstellation c(order);
    for (int i = 0; i < order; ++i) {
      for (double r : {1e-9, 0.3, 1.0, 7.0, 1e6}) {
        CHECK(detect(c.symbol(i) * r, c) == i);
      }
    }
  }
}

TEST_CASE("detect is rotation equivariant") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (int order : {2, 4, 8}) {
    const PskConstellation c(order);
    const cplx step = std::polar(1.0, 2.0 * std::numbers::pi / order);
    for (int t = 0; t < 500; ++t) {
      const cplx z = std::polar(0.5 + t * 0.01, angle(rng));
      CHECK(detect(z * step, c) == (detect(z, c) + 1) % order);
    }
  }
}

TEST_CASE("random symbols") {
  const PskConstellation qpsk(4);
  std::mt19937_64 a(42);
  std::mt19937_64 b(42);
  CHECK(rispm::random_symbols(5, a, qpsk).indices() == rispm::random_symbols(5, b, qpsk).indices());

  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const int s = rispm::random_symbols(1, rng, qpsk)[0];
    CHECK((s >= 0 && s < 4));
  }

  const PskConstellation bpsk(2);
  int ones = 0;
  constexpr int kDraws = 100000;
  for (int t = 0; t < kDraws; ++t) ones += rispm::random_symbols(1, rng, bpsk)[0];
  CHECK(static_cast<double>(ones) / kDraws == doctest::Approx(0.5).epsilon(0.02));

  CHECK_THROWS_AS(rispm::random_symbols(0, rng, qpsk), std::invalid_argument);
}

}
