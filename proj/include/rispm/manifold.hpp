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

#include <stdexcept>

#include "rispm/geometry.hpp"

// Oblique manifold of 2 x N matrices with unit columns (a product of N
// circles). Embedded Frobenius metric, projection retraction, projection
// transport.
namespace rispm::oblique {

/// Element of the tangent space at some base point: each column is
/// orthogonal to the matching column of the base point.
struct TangentVector {
  RealMatrix2X xi;
};

/// Raised by retract() when a column collapses to zero length.
class DegenerateRetraction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Column-wise removal of the radial component: xi_n = g_n - <theta_n, g_n> theta_n.
TangentVector project_tangent(const PhasePoint& base, const RealMatrix2X& ambient);

/// Column-wise normalization of base + step * xi; a zero step returns base as is.
PhasePoint retract(const PhasePoint& base, const TangentVector& xi, double step);

/// Moves a tangent vector to the tangent space at `target` by projection.
TangentVector transport(const PhasePoint& target, const TangentVector& xi);

double inner(const TangentVector& a, const TangentVector& b);
double norm(const TangentVector& a);

/// Largest |<theta_n, xi_n>| over columns.
double tangent_defect(const PhasePoint& base, const TangentVector& xi);

}  // namespace rispm::oblique
