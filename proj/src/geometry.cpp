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

#include "rispm/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <fmt/core.h>

namespace rispm {

PhasePoint::PhasePoint(RealMatrix2X theta) : theta_(std::move(theta)) {
  if (theta_.cols() < 1) {
    throw std::invalid_argument("phase point needs at least one element");
  }
  if (!theta_.allFinite()) {
    throw std::invalid_argument("phase point has non-finite entries");
  }
  const double defect = manifold_defect(theta_);
  if (defect > kTolerance) {
    throw std::invalid_argument(
        fmt::format("phase point is off the manifold: column norm defect {:.3e}", defect));
  }
}

PhasePoint PhasePoint::from_complex(const CVector& theta) {
  RealMatrix2X m(2, theta.size());
  m.row(0) = theta.real().transpose();
  m.row(1) = theta.imag().transpose();
  return PhasePoint(std::move(m));
}

PhasePoint PhasePoint::from_phases(const Eigen::VectorXd& phases) {
  RealMatrix2X m(2, phases.size());
  m.row(0) = phases.array().cos().matrix().transpose();
  m.row(1) = phases.array().sin().matrix().transpose();
  return PhasePoint(std::move(m));
}

PhasePoint PhasePoint::random(int elements, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  Eigen::VectorXd phases(elements);
  for (int n = 0; n < elements; ++n) {
    phases[n] = angle(rng);
  }
  return from_phases(phases);
}

CVector PhasePoint::to_complex() const {
  CVector out(theta_.cols());
  for (Eigen::Index n = 0; n < theta_.cols(); ++n) {
    out[n] = cplx(theta_(0, n), theta_(1, n));
  }
  return out;
}

double manifold_defect(const RealMatrix2X& theta) {
  if (theta.cols() == 0) {
    return 0.0;
  }
  return (theta.colwise().norm().array() - 1.0).abs().maxCoeff();
}

MddtPair mddt(cplx omega, double power, double half_angle) {
  if (power < 0.0) {
    throw std::invalid_argument(fmt::format("power must be non-negative, got {}", power));
  }
  const double amp = std::sqrt(power);
  const double s = std::sin(half_angle);
  const double c = std::cos(half_angle);
  return {amp * (omega.real() * s - omega.imag() * c), amp * (omega.real() * s + omega.imag() * c)};
}

DirectionMatrices build_direction_matrices(const RotatedChannels& rotated, double half_angle) {
  const double s = std::sin(half_angle);
  const double c = std::cos(half_angle);
  DirectionMatrices out;
  out.u1.reserve(rotated.a.size());
  out.u2.reserve(rotated.a.size());
  for (const CVector& a : rotated.a) {
    const Eigen::VectorXd re = a.real();
    const Eigen::VectorXd im = a.imag();
    DirectionMatrix u1(a.size(), 2);
    DirectionMatrix u2(a.size(), 2);
    // column 0 multiplies Re(theta), column 1 multiplies Im(theta)
    u1.col(0) = re * s - im * c;
    u1.col(1) = -re * c - im * s;
    u2.col(0) = re * s + im * c;
    u2.col(1) = re * c - im * s;
    out.u1.push_back(std::move(u1));
    out.u2.push_back(std::move(u2));
  }
  return out;
}

double union_bound_sep(const MddtPair& d, double noise_std) {
  if (!(noise_std > 0.0)) {
    throw std::invalid_argument(fmt::format("noise std must be positive, got {}", noise_std));
  }
  return 0.5 * std::erfc(d.d1 / noise_std) + 0.5 * std::erfc(d.d2 / noise_std);
}

}  // namespace rispm
