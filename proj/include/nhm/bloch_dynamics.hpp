// Copyright 2026 The nhm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// bloch_dynamics.hpp: the qubit flows written as real ODEs in Bloch
// coordinates, with fixed points and their linear stability.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nhm/evolution.hpp"
#include "nhm/matrix_core.hpp"

namespace nhm {

enum class FlowVariant {
  Normalized3d,    // (x, y, z) under the trace-preserving flow
  Unnormalized4d,  // (x, y, z, w) with w the trace, no nonlinear terms
};

struct FlowSpec {
  FlowVariant variant = FlowVariant::Normalized3d;
  double gamma = 0.0;

  int arity() const noexcept { return variant == FlowVariant::Normalized3d ? 3 : 4; }
};

using FlowVector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;
using FlowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 4, 4>;

// Normalized:   x' = -2y - g x z,  y' = 2x - g y z,  z' = g (1 - z^2)
// Unnormalized: x' = -2y - g x,    y' = 2x - g y,    z' = g (w - z),  w' = g (z - w)
FlowVector flow_rhs(const FlowSpec& spec, const FlowVector& state);

FlowMatrix analytic_jacobian(const FlowSpec& spec, const FlowVector& state);
// Central differences with step h.
FlowMatrix numerical_jacobian(const FlowSpec& spec, const FlowVector& state, double h = 1e-6);

enum class FixedPointKind { Sink, Source, Saddle, Center, LineOfFixedPoints, NonHyperbolic };

std::string to_string(FixedPointKind kind);

inline constexpr double kZeroRealPart = 1e-9;

// Classifies a spectrum; |Re| < kZeroRealPart counts as zero.
FixedPointKind classify_spectrum(const std::vector<Complex>& eigenvalues);

struct FixedPointReport {
  FlowVector location;
  std::vector<Complex> jacobian_eigenvalues;
  FixedPointKind classification = FixedPointKind::NonHyperbolic;
  // Line reports: unit direction of the line and the classification shared by
  // each of its points; `location` is a representative member.
  std::optional<FlowVector> line_direction;
  std::optional<FixedPointKind> member_classification;
};

std::vector<Complex> jacobian_eigenvalues(const FlowMatrix& j);

// Linearization of the flow at a point (not required to be a fixed point).
FixedPointReport classify_point(const FlowSpec& spec, const FlowVector& state);

// Closed-form enumeration: the two poles for gamma > 0, the z-axis line for
// gamma = 0, and the line x = y = 0, z = w for the unnormalized flow.
std::vector<FixedPointReport> fixed_points(const FlowSpec& spec);

struct FlowTrajectory {
  std::vector<double> times;
  std::vector<FlowVector> states;
};

FlowTrajectory integrate_flow(const FlowSpec& spec, const FlowVector& start, double t0, double t1,
                              const IntegratorControl& ctrl = {});

struct ConsistencyReport {
  double gamma = 0.0;
  double max_deviation = 0.0;
  BlochState final_flow;
  BlochState final_density;
};

// Integrates the Bloch flow and the density-matrix engine side by side for
// H = sigma_z - i (g/2)(I - sigma_z) and reports the largest coordinate gap.
// ValidationError for Hamiltonians outside that family.
ConsistencyReport verify_bloch_consistency(const SplitHamiltonian& h, const DensityMatrix& rho0,
                                           double t0, double t1, const IntegratorControl& ctrl = {});

struct FieldSample {
  FlowVector point;
  FlowVector velocity;
};

// Vector field on a regular n^3 grid clipped to the closed unit ball.
std::vector<FieldSample> phase_portrait(const FlowSpec& spec, int points_per_axis);

}  // namespace nhm
