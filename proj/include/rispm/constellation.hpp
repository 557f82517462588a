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

#include <complex>
#include <cstddef>
#include <random>
#include <vector>

namespace rispm {

using cplx = std::complex<double>;

/// M-PSK alphabet. Symbol i sits at phase 2*pi*i/M + offset; the decision
/// region of symbol i is the angular sector of half-width pi/M around it.
class PskConstellation {
 public:
  /// Uses default_offset(order).
  explicit PskConstellation(int order);
  PskConstellation(int order, double offset);

  /// pi/M for even M (symmetric placement, e.g. QPSK at +-pi/4, +-3pi/4), 0 otherwise.
  static double default_offset(int order);

  int order() const { return order_; }
  double half_angle() const { return half_angle_; }
  double offset() const { return offset_; }

  const std::vector<cplx>& symbols() const { return symbols_; }
  cplx symbol(int index) const { return symbols_.at(static_cast<std::size_t>(index)); }
  double symbol_phase(int index) const;

 private:
  int order_;
  double offset_;
  double half_angle_;
  std::vector<cplx> symbols_;
};

/// Per-user data symbols, stored as indices into a constellation.
class SymbolVector {
 public:
  SymbolVector(std::vector<int> indices, const PskConstellation& constellation);

  std::size_t size() const { return indices_.size(); }
  int operator[](std::size_t k) const { return indices_[k]; }
  const std::vector<int>& indices() const { return indices_; }

 private:
  std::vector<int> indices_;
};

/// Hard PSK detection by angular sector. A sample lying exactly on a sector
/// boundary goes to the smaller of the two indices; z == 0 maps to index 0.
int detect(cplx z, const PskConstellation& constellation);

/// i.i.d. uniform symbols for `users` users.
SymbolVector random_symbols(int users, std::mt19937_64& rng, const PskConstellation& constellation);

}  // namespace rispm
