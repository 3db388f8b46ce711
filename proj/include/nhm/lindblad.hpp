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

// lindblad.hpp: Lindblad master equation for small systems and the
// incoherent sum of two trace-decaying qubit evolutions.

#pragma once

#include <span>
#include <vector>

#include "nhm/evolution.hpp"
#include "nhm/matrix_core.hpp"

namespace nhm {

struct JumpOperator {
  ComplexMatrix op;
  double rate = 0.0;
};

// drho/dt = -i[H, rho] + sum_k rate_k (L rho L^dagger - {L^dagger L, rho} / 2)
class LindbladModel {
 public:
  LindbladModel(ComplexMatrix h, std::vector<JumpOperator> jumps);

  const ComplexMatrix& hamiltonian() const noexcept { return h_; }
  const std::vector<JumpOperator>& jumps() const noexcept { return jumps_; }
  int dim() const noexcept { return static_cast<int>(h_.rows()); }

  ComplexMatrix rhs(const ComplexMatrix& rho) const;

 private:
  ComplexMatrix h_;
  std::vector<JumpOperator> jumps_;
};

// Samples are stored unnormalized so that trace conservation stays observable.
Trajectory lindblad_evolve(const LindbladModel& m, const DensityMatrix& rho0, double t0, double t1,
                           const IntegratorControl& ctrl = {}, std::span<const double> extra_samples = {});

struct IncoherentSumResult {
  ComplexMatrix branch_lower;  // diag(l1, l2 - i g): keeps the ground population
  ComplexMatrix branch_upper;  // diag(l1 - i g, l2): keeps the excited population
  ComplexMatrix raw_sum;
  double raw_trace = 0.0;
  DensityMatrix normalized;
};

IncoherentSumResult incoherent_sum(double lambda1, double lambda2, double gamma,
                                   const PureStateAmplitudes& c, double t);

struct DephasingRow {
  double t = 0.0;
  double raw_trace = 0.0;
  double population0 = 0.0;
  double population1 = 0.0;
  double coherence = 0.0;           // |rho_01| of the normalized sum
  double lindblad_coherence = 0.0;  // |rho_01| of the fitted dephasing solution
  double distance_to_lindblad = 0.0;
  double distance_to_diagonal = 0.0;  // to diag(|c1|^2, |c2|^2)
};

struct DephasingComparison {
  // Coherence envelope exp(-gamma_eff t) best matching sech(gamma t) on the grid.
  double gamma_eff = 0.0;
  std::vector<DephasingRow> rows;
};

// Dephasing model: H = diag(l1, l2), L = sigma_z at rate gamma_eff / 2.
DephasingComparison compare_to_dephasing(double lambda1, double lambda2, double gamma,
                                         const PureStateAmplitudes& c, std::span<const double> t_grid,
                                         const IntegratorControl& ctrl = {});

}  // namespace nhm
