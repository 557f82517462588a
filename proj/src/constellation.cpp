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

#include "rispm/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <fmt/core.h>

namespace rispm {

namespace {

int wrap_index(long long i, int order) {
  long long r = i % order;
  return static_cast<int>(r < 0 ? r + order : r);
}

}  // namespace

PskConstellation::PskConstellation(int order) : PskConstellation(order, default_offset(order)) {}

PskConstellation::PskConstellation(int order, double offset)
    : order_(order), offset_(offset), half_angle_(0.0) {
  if (order < 2) {
    throw std::invalid_argument(fmt::format("PSK order must be >= 2, got {}", order));
  }
  if (!std::isfinite(offset)) {
    throw std::invalid_argument("PSK offset must be finite");
  }
  half_angle_ = std::numbers::pi / order;
  symbols_.reserve(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    symbols_.push_back(std::polar(1.0, symbol_phase(i)));
  }
}

double PskConstellation::default_offset(int order) {
  return order % 2 == 0 ? std::numbers::pi / order : 0.0;
}

double PskConstellation::symbol_phase(int index) const {
  return 2.0 * half_angle_ * index + offset_;
}

SymbolVector::SymbolVector(std::vector<int> indices, const PskConstellation& constellation)
    : indices_(std::move(indices)) {
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] < 0 || indices_[k] >= constellation.order()) {
      throw std::out_of_range(fmt::format("symbol index {} of user {} outside [0, {})",
                                          indices_[k], k, constellation.order()));
    }
  }
}

int detect(cplx z, const PskConstellation& constellation) {
  if (z == cplx(0.0, 0.0)) {
    return 0;
  }
  const int order = constellation.order();
  // position in units of the symbol spacing; symbol i sits at integer i
  const double x = (std::arg(z) - constellation.offset()) / (2.0 * constellation.half_angle());
  const double below = std::floor(x);
  const double frac = x - below;
  const auto lo = static_cast<long long>(below);
  if (frac < 0.5) {
    return wrap_index(lo, order);
  }
  if (frac > 0.5) {
    return wrap_index(lo + 1, order);
  }
  return std::min(wrap_index(lo, order), wrap_index(lo + 1, order));
}

SymbolVector random_symbols(int users, std::mt19937_64& rng, const PskConstellation& constellation) {
  if (users < 1) {
    throw std::invalid_argument(fmt::format("need at least one user, got {}", users));
  }
  std::uniform_int_distribution<int> pick(0, constellation.order() - 1);
  std::vector<int> indices(static_cast<std::size_t>(users));
  for (auto& i : indices) {
    i = pick(rng);
  }
  return SymbolVector(std::move(indices), constellation);
}

}  // namespace rispm
