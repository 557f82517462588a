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

#include <random>
#include <vector>

#include <Eigen/Core>

#include "rispm/channel.hpp"

namespace rispm {

/// 2 x N real matrix; row 0 holds Re(theta), row 1 holds Im(theta).
using RealMatrix2X = Eigen::Matrix<double, 2, Eigen::Dynamic>;
/// N x 2 real matrix, contracted against a 2 x N point via trace(Theta * U).
using DirectionMatrix = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// A point of the oblique manifold {Theta in R^{2xN} : every column has unit norm},
/// i.e. a vector of unit-modulus RIS reflection coefficients.
class PhasePoint {
 public:
  static constexpr double kTolerance = 1e-10;

  /// Throws std::invalid_argument when a column norm is off by more than kTolerance.
  explicit PhasePoint(RealMatrix2X theta);

  static PhasePoint from_complex(const CVector& theta);
  /// theta_n = exp(j * phases[n])
  static PhasePoint from_phases(const Eigen::VectorXd& phases);
  /// Uniform phases.
  static PhasePoint random(int elements, std::mt19937_64& rng);

  const RealMatrix2X& matrix() const { return theta_; }
  int elements() const { return static_cast<int>(theta_.cols()); }
  CVector to_complex() const;

 private:
  RealMatrix2X theta_;
};

/// Largest deviation of a column norm from one.
double manifold_defect(const RealMatrix2X& theta);

/// Per-user matrices U1[k], U2[k] (N x 2) with
///   trace(Theta U1[k]) = Re(w) sin(phi) - Im(w) cos(phi)
///   trace(Theta U2[k]) = Re(w) sin(phi) + Im(w) cos(phi),   w = a[k]^T theta.
struct DirectionMatrices {
  std::vector<DirectionMatrix> u1;
  std::vector<DirectionMatrix> u2;

  int users() const { return static_cast<int>(u1.size()); }
  int elements() const { return u1.empty() ? 0 : static_cast<int>(u1.front().rows()); }
};

/// Signed distances of a noiseless sample to the two boundaries of its
/// decision sector, in amplitude units. Negative when outside the sector.
struct MddtPair {
  double d1 = 0.0;
  double d2 = 0.0;
};

/// trace(theta * u) without forming the product.
inline double trace_product(const RealMatrix2X& theta, const DirectionMatrix& u) {
  return theta.row(0).dot(u.col(0)) + theta.row(1).dot(u.col(1));
}

MddtPair mddt(cplx omega, double power, double half_angle);

DirectionMatrices build_direction_matrices(const RotatedChannels& rotated, double half_angle);

/// 0.5 erfc(d1/sigma) + 0.5 erfc(d2/sigma). Always >= the exact symbol error
/// probability for a sample with these boundary distances.
double union_bound_sep(const MddtPair& d, double noise_std);

}  // namespace rispm
