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

#include <iosfwd>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "rispm/constellation.hpp"

namespace rispm {

using CVector = Eigen::VectorXcd;

/// Two-hop channel of a RIS passive transmitter: RF generator -> RIS (h_g)
/// and RIS -> user k (h_u[k]). The effective row of user k has entries
/// conj(h_u[k][n]) * h_g[n], so the noiseless sample of user k is
/// sqrt(P) * sum_n conj(h_eff[k][n]) * theta[n].
class ChannelSet {
 public:
  ChannelSet(CVector generator, std::vector<CVector> users, double noise_var);

  /// Every hop coefficient equal to one.
  static ChannelSet all_ones(int elements, int users, double noise_var);

  int elements() const { return static_cast<int>(generator_.size()); }
  int users() const { return static_cast<int>(users_.size()); }

  const CVector& generator() const { return generator_; }
  const CVector& user(int k) const { return users_.at(static_cast<std::size_t>(k)); }
  const CVector& effective(int k) const { return effective_.at(static_cast<std::size_t>(k)); }

  double noise_var() const { return noise_var_; }
  double noise_std() const;

  /// sum_n conj(h_eff[k][n]) * theta[n]
  cplx response(int k, const CVector& theta) const;

 private:
  CVector generator_;
  std::vector<CVector> users_;
  std::vector<CVector> effective_;
  double noise_var_;
};

/// Channels after rotating each user's symbol onto the positive real axis:
/// a[k] = conj(s_k) * conj(h_eff[k]), so that a[k]^T theta = conj(s_k) h_k^H theta.
struct RotatedChannels {
  std::vector<CVector> a;

  int users() const { return static_cast<int>(a.size()); }
  int elements() const { return a.empty() ? 0 : static_cast<int>(a.front().size()); }
};

/// i.i.d. CN(0, 1) entries on both hops.
ChannelSet generate_rayleigh(int elements, int users, double noise_var, std::mt19937_64& rng);

RotatedChannels rotate(const ChannelSet& channels, const SymbolVector& symbols,
                       const PskConstellation& constellation);

// Plain-text fixture format: K+1 rows (h_g first, then h_u[0..K-1]), each
// row N whitespace-separated `re,im` tokens. Lines starting with '#' and
// blank lines are ignored.
void write_channel_set(std::ostream& os, const ChannelSet& channels);
ChannelSet read_channel_set(std::istream& is, double noise_var);

}  // namespace rispm
