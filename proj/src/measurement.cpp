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

#include "nhm/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nhm/errors.hpp"

namespace nhm {

void validate(const MeasurementScenario& s) {
  const SwitchingProfile& p = s.hamiltonian.profile();
  if (p.kind() == SwitchKind::AlwaysOn) {
    throw ValidationError("scenario: the measurement needs a finite window");
  }
  if (s.hamiltonian.dim() != s.initial_state.dim()) {
    throw DimensionError("scenario: state and Hamiltonian dimensions differ");
  }
  if (!(s.t_start < p.t_i() && p.t_i() < p.t_f() && p.t_f() < s.t_end)) {
    throw ValidationError("scenario: requires t_start < t_i < t_f < t_end");
  }
}

double collapse_degree(double gamma, double t_i, double t_f) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("collapse_degree: gamma must be > 0");
  if (!(t_f >= t_i) || !std::isfinite(t_i) || !std::isfinite(t_f)) {
    throw ValidationError("collapse_degree: requires t_f >= t_i");
  }
  return 1.0 - std::exp(-gamma * (t_f - t_i));
}

ScenarioResult run_scenario(const MeasurementScenario& s) {
  validate(s);
  const SwitchingProfile& prof = s.hamiltonian.profile();
  const AttractorPrediction ap = attractor_prediction(s.hamiltonian.window_hamiltonian());
  if (ap.kind != AttractorKind::Unique) {
    throw DegenerateAttractorError(
        "run_scenario: window Hamiltonian has no unique attractor; use degeneracy_run");
  }

  CollapseMetrics m;
  m.attractor = ap;
  m.target_index = ap.index();
  m.target = ap.eigenvectors[static_cast<std::size_t>(m.target_index)];
  double second = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ap.eigenvalues.size(); ++k) {
    if (static_cast<int>(k) != m.target_index) second = std::max(second, ap.eigenvalues[k].imag());
  }
  m.rate = ap.eigenvalues[static_cast<std::size_t>(m.target_index)].imag() - second;
  m.kappa = collapse_degree(m.rate, prof.t_i(), prof.t_f());

  for (std::size_t k = 0; k < ap.eigenvectors.size(); ++k) {
    if (static_cast<int>(k) == m.target_index) continue;
    if (population(s.initial_state, ap.eigenvectors[k]) > 1.0 - 1e-12) {
      m.warnings.push_back("initial state is a non-attracting eigenstate of the window Hamiltonian; "
                           "it is an equilibrium and will not collapse");
    }
  }

  const double marks[] = {prof.t_i(), prof.t_f()};
  ScenarioResult r{evolve_ode(s.hamiltonian, s.initial_state, s.t_start, s.t_end, s.control, marks), m};
  const Trajectory& tr = r.trajectory;

  const auto target_pop = [&](std::size_t i) {
    return (m.target.adjoint() * tr.state(i) * m.target)(0, 0).real();
  };
  std::size_t i_f = 0;
  while (i_f < tr.size() && tr.time(i_f) < prof.t_f()) ++i_f;
  r.metrics.target_population_at_tf = target_pop(i_f);
  for (std::size_t i = i_f; i < tr.size(); ++i) {
    r.metrics.persistence_error =
        std::max(r.metrics.persistence_error, std::abs(target_pop(i) - r.metrics.target_population_at_tf));
  }
  r.metrics.final_target_population = target_pop(tr.size() - 1);
  return r;
}

DegeneracyReport degeneracy_run(DegeneracyCase which, const DensityMatrix& rho0,
                                const DegeneracyOptions& o) {
  if (rho0.dim() != 4) throw DimensionError("degeneracy_run: requires a 4-level state");
  const SwitchedHamiltonian h =
      degeneracy_case(which, o.gamma, SwitchingProfile::tanh_window(o.gamma, o.t_i, o.t_f));
  DegeneracyReport r;
  r.which = which;
  r.gamma = o.gamma;
  r.t_i = o.t_i;
  r.t_f = o.t_f;
  r.attractor = attractor_prediction(h.window_hamiltonian());
  const double marks[] = {o.t_i, o.t_f};
  r.trajectory = evolve_ode(h, rho0, o.t_start, o.t_end, o.control, marks);
  const Trajectory& tr = r.trajectory;
  r.final_populations = tr.populations(tr.size() - 1);

  // The diagonal cases keep eigenvector k on basis state k.
  double kept = 0.0;
  for (int k : r.attractor.indices) kept += r.final_populations(k);
  r.final_leak = r.attractor.kind == AttractorKind::None ? 0.0 : 1.0 - kept;

  const double p1_0 = tr.population(0, 1);
  if (p1_0 <= 0.0) {
    r.max_ratio_deviation = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double ratio0 = tr.population(0, 0) / p1_0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const double ratio = tr.population(i, 0) / tr.population(i, 1);
      r.max_ratio_deviation = std::max(r.max_ratio_deviation, std::abs(ratio - ratio0));
    }
  }
  return r;
}

std::pair<std::vector<double>, std::vector<double>> overlap_curves(const Trajectory& traj,
                                                                   const DensityMatrix& ref) {
  if (traj.empty()) throw ValidationError("overlap_curves: empty trajectory");
  if (ref.dim() != 2 || traj.dim() != 2) throw DimensionError("overlap_curves: requires N = 2");
  const ComplexMatrix complement = identity(2) - ref.matrix();
  std::pair<std::vector<double>, std::vector<double>> out;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out.first.push_back((traj.state(i) * ref.matrix()).trace().real());
    out.second.push_back((traj.state(i) * complement).trace().real());
  }
  return out;
}

}  // namespace nhm
