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

// measurement.hpp: switched measurement scenarios, collapse metrics and the
// four-level degeneracy studies.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nhm/evolution.hpp"
#include "nhm/hamiltonian.hpp"

namespace nhm {

// Drive before t_i and after t_f is the Hermitian base of `hamiltonian`.
struct MeasurementScenario {
  SwitchedHamiltonian hamiltonian;
  DensityMatrix initial_state;
  double t_start = 0.0;
  double t_end = 0.0;
  IntegratorControl control{};
};

// Throws ValidationError unless t_start < t_i < t_f < t_end.
void validate(const MeasurementScenario& s);

// 1 - exp(-gamma (t_f - t_i)).
double collapse_degree(double gamma, double t_i, double t_f);

struct CollapseMetrics {
  // Uses the gap between the largest and next imaginary part of the window
  // Hamiltonian's spectrum as the rate.
  double kappa = 0.0;
  double rate = 0.0;
  int target_index = -1;
  ComplexVector target;
  double target_population_at_tf = 0.0;
  double final_target_population = 0.0;
  // max |p(t) - p(t_f)| over samples with t >= t_f.
  double persistence_error = 0.0;
  AttractorPrediction attractor;
  std::vector<std::string> warnings;
};

struct ScenarioResult {
  Trajectory trajectory;
  CollapseMetrics metrics;
};

// DegenerateAttractorError if the window Hamiltonian lacks a unique attractor.
ScenarioResult run_scenario(const MeasurementScenario& s);

struct DegeneracyReport {
  DegeneracyCase which = DegeneracyCase::A;
  double gamma = 0.0;
  double t_i = 0.0;
  double t_f = 0.0;
  AttractorPrediction attractor;
  Trajectory trajectory;
  RealVector final_populations;
  // Largest |p0(t)/p1(t) - p0(0)/p1(0)| over samples; NaN when p1(0) = 0.
  double max_ratio_deviation = 0.0;
  // Population outside the attracting eigenstates at the final sample.
  double final_leak = 0.0;
};

struct DegeneracyOptions {
  double gamma = 3.0;
  double t_i = 6.0;
  double t_f = 8.0;
  double t_start = 0.0;
  double t_end = 10.0;
  IntegratorControl control{};
};

DegeneracyReport degeneracy_run(DegeneracyCase which, const DensityMatrix& rho0,
                                const DegeneracyOptions& opts = {});

// (Tr rho(t) rho_ref, Tr rho(t)(I - rho_ref)) per sample; N = 2 only.
std::pair<std::vector<double>, std::vector<double>> overlap_curves(const Trajectory& traj,
                                                                   const DensityMatrix& ref);

}  // namespace nhm
