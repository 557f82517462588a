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

#include "rispm/manifold.hpp"

#include <cmath>
#include <utility>

#include <fmt/core.h>

namespace rispm::oblique {

namespace {

void check_columns(const PhasePoint& base, const RealMatrix2X& m) {
  if (m.cols() != base.elements()) {
    throw std::invalid_argument(
        fmt::format("tangent data has {} columns, base point has {}", m.cols(), base.elements()));
  }
}

}  // namespace

TangentVector project_tangent(const PhasePoint& base, const RealMatrix2X& ambient) {
  check_columns(base, ambient);
  const RealMatrix2X& theta = base.matrix();
  const Eigen::RowVectorXd radial = theta.cwiseProduct(ambient).colwise().sum();
  RealMatrix2X xi = ambient;
  xi.row(0) -= radial.cwiseProduct(theta.row(0));
  xi.row(1) -= radial.cwiseProduct(theta.row(1));
  return {std::move(xi)};
}

PhasePoint retract(const PhasePoint& base, const TangentVector& xi, double step) {
  check_columns(base, xi.xi);
  if (step == 0.0) {
    return base;
  }
  RealMatrix2X moved = base.matrix() + step * xi.xi;
  const Eigen::RowVectorXd norms = moved.colwise().norm();
  for (Eigen::Index n = 0; n < norms.size(); ++n) {
    if (!(norms[n] > 0.0) || !std::isfinite(norms[n])) {
      throw DegenerateRetraction(
          fmt::format("retraction collapsed column {} (step {})", n, step));
    }
  }
  moved.row(0).array() /= norms.array();
  moved.row(1).array() /= norms.array();
  return PhasePoint(std::move(moved));
}

TangentVector transport(const PhasePoint& target, const TangentVector& xi) {
  return project_tangent(target, xi.xi);
}

double inner(const TangentVector& a, const TangentVector& b) {
  return a.xi.cwiseProduct(b.xi).sum();
}

double norm(const TangentVector& a) { return a.xi.norm(); }

double tangent_defect(const PhasePoint& base, const TangentVector& xi) {
  check_columns(base, xi.xi);
  if (xi.xi.cols() == 0) {
    return 0.0;
  }
  return base.matrix().cwiseProduct(xi.xi).colwise().sum().cwiseAbs().maxCoeff();
}

}  // namespace rispm::oblique
