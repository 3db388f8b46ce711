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

// evolution.hpp: the nonlinear density-matrix ODE, the normalized exponential
// propagator, the two-level closed form and the unnormalized flow.

#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nhm/hamiltonian.hpp"
#include "nhm/integrator.hpp"
#include "nhm/matrix_core.hpp"

namespace nhm {

struct IntegratorControl {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_step = 0.0;      // 0: span / 100
  double sample_every = 0.0;  // 0: span / 400
};

struct TrajectoryDiagnostics {
  long accepted_steps = 0;
  long rejected_steps = 0;
  long rhs_evaluations = 0;
  // Largest |Tr - 1| seen before renormalization (normalized engines).
  double max_trace_drift = 0.0;
  // Most negative eigenvalue clipped to zero.
  double max_clipped = 0.0;
};

/// Time-ordered samples of an evolving state.
///
/// Normalized trajectories validate every sample as a density matrix;
/// unnormalized ones keep the raw matrix and expose its trace as `w`.
class Trajectory {
 public:
  explicit Trajectory(bool normalized = true) : normalized_(normalized) {}

  void push(double t, const ComplexMatrix& state);
  void add_reference(std::string name, const DensityMatrix& rho);

  bool normalized() const noexcept { return normalized_; }
  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }
  int dim() const;

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<ComplexMatrix>& states() const noexcept { return states_; }
  const ComplexMatrix& state(std::size_t i) const { return states_.at(i); }
  const ComplexMatrix& final_state() const;
  double time(std::size_t i) const { return times_.at(i); }

  DensityMatrix density(std::size_t i) const;
  RealVector populations(std::size_t i) const;
  double population(std::size_t i, int k) const;
  double purity(std::size_t i) const;
  double trace(std::size_t i) const;
  BlochState bloch(std::size_t i) const;

  const std::vector<std::pair<std::string, DensityMatrix>>& references() const noexcept {
    return references_;
  }
  // Tr(rho(t_i) rho_ref) for reference `r`.
  double overlap(std::size_t i, std::size_t r) const;

  TrajectoryDiagnostics diagnostics;

 private:
  bool normalized_;
  std::vector<double> times_;
  std::vector<ComplexMatrix> states_;
  std::vector<std::pair<std::string, DensityMatrix>> references_;
};

// -i[H_h, rho] - {H_a, rho} + 2 Tr(rho H_a) rho
ComplexMatrix rhs_nonlinear(const SplitHamiltonian& h, const ComplexMatrix& rho);
ComplexMatrix rhs_nonlinear(const SplitHamiltonian& h, const DensityMatrix& rho);
// -i[H_h, rho] - {H_a, rho}
ComplexMatrix rhs_unnormalized(const SplitHamiltonian& h, const ComplexMatrix& rho);

// Sample grid: t0, t0 + dt, ..., t1 plus `extra` points inside the span.
std::vector<double> sample_grid(double t0, double t1, double dt, std::span<const double> extra = {});

Trajectory evolve_ode(const SwitchedHamiltonian& h, const DensityMatrix& rho0, double t0, double t1,
                      const IntegratorControl& ctrl = {}, std::span<const double> extra_samples = {});

Trajectory evolve_unnormalized(const SwitchedHamiltonian& h, const DensityMatrix& rho0, double t0,
                               double t1, const IntegratorControl& ctrl = {},
                               std::span<const double> extra_samples = {});

// e^{-iHt} rho0 e^{iH^dagger t}, no normalization.
ComplexMatrix propagate_unnormalized(const ComplexMatrix& h, const ComplexMatrix& rho0, double t);

// Normalized exponential propagator for constant H. DegenerateEvolutionError
// when the unnormalized trace drops below 1e-300.
DensityMatrix evolve_closed_form(const ComplexMatrix& h, const DensityMatrix& rho0, double t);

// H = R0 I + R . sigma with complex coefficients.
struct TwoLevelParams {
  Complex r0{0.0, 0.0};
  std::array<Complex, 3> r{};

  static TwoLevelParams from_matrix(const ComplexMatrix& h);
  ComplexMatrix matrix() const;
};

// Unnormalized N(t) of the Pauli-expansion closed form.
ComplexMatrix two_level_numerator(const TwoLevelParams& params, const DensityMatrix& rho0, double t);
DensityMatrix evolve_two_level(const TwoLevelParams& params, const DensityMatrix& rho0, double t);

enum class CaseFormula { A, B, C1, C2 };

// Printed two-level closed forms with omega = (lambda1 - lambda2) / 2.
// A: diag(l1 + i g, l2 - i g); B: diag(l1 + i g, l2); C1: diag(l1, l2 - i g)
// normalized; C2: the same without normalization.
ComplexMatrix case_formula(CaseFormula which, double lambda1, double lambda2, double gamma,
                           const PureStateAmplitudes& c, double t);

}  // namespace nhm
