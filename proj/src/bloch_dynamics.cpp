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

#include "nhm/bloch_dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "nhm/errors.hpp"
#include "nhm/integrator.hpp"

namespace nhm {

namespace {

void check_spec(const FlowSpec& spec) {
  if (!(spec.gamma >= 0.0) || !std::isfinite(spec.gamma)) {
    throw ValidationError("FlowSpec: gamma must be finite and >= 0");
  }
}

void check_arity(const FlowSpec& spec, const FlowVector& state) {
  if (state.size() != spec.arity()) {
    throw DimensionError("flow: expected " + std::to_string(spec.arity()) + " coordinates, got " +
                         std::to_string(state.size()));
  }
}

FlowVector vec(std::initializer_list<double> v) {
  FlowVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

FlowVector flow_rhs(const FlowSpec& spec, const FlowVector& s) {
  check_spec(spec);
  check_arity(spec, s);
  const double g = spec.gamma;
  if (spec.variant == FlowVariant::Normalized3d) {
    return vec({-2.0 * s(1) - g * s(0) * s(2), 2.0 * s(0) - g * s(1) * s(2), -g * s(2) * s(2) + g});
  }
  return vec({-2.0 * s(1) - g * s(0), 2.0 * s(0) - g * s(1), -g * s(2) + g * s(3), g * s(2) - g * s(3)});
}

FlowMatrix analytic_jacobian(const FlowSpec& spec, const FlowVector& s) {
  check_spec(spec);
  check_arity(spec, s);
  const double g = spec.gamma;
  if (spec.variant == FlowVariant::Normalized3d) {
    FlowMatrix j(3, 3);
    j << -g * s(2), -2.0, -g * s(0),
          2.0, -g * s(2), -g * s(1),
          0.0, 0.0, -2.0 * g * s(2);
    return j;
  }
  FlowMatrix j(4, 4);
  j << -g, -2.0, 0.0, 0.0,
        2.0, -g, 0.0, 0.0,
        0.0, 0.0, -g, g,
        0.0, 0.0, g, -g;
  return j;
}

FlowMatrix numerical_jacobian(const FlowSpec& spec, const FlowVector& s, double h) {
  check_arity(spec, s);
  if (!(h > 0.0)) throw ValidationError("numerical_jacobian: step must be positive");
  const auto n = s.size();
  FlowMatrix j(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    FlowVector up = s;
    FlowVector down = s;
    up(c) += h;
    down(c) -= h;
    j.col(c) = (flow_rhs(spec, up) - flow_rhs(spec, down)) / (2.0 * h);
  }
  return j;
}

std::string to_string(FixedPointKind kind) {
  switch (kind) {
    case FixedPointKind::Sink: return "sink";
    case FixedPointKind::Source: return "source";
    case FixedPointKind::Saddle: return "saddle";
    case FixedPointKind::Center: return "center";
    case FixedPointKind::LineOfFixedPoints: return "line-of-fixed-points";
    case FixedPointKind::NonHyperbolic: return "non-hyperbolic";
  }
  return "unknown";
}

FixedPointKind classify_spectrum(const std::vector<Complex>& eigenvalues) {
  int negative = 0;
  int positive = 0;
  int zero = 0;
  bool oscillatory_zero = false;
  for (const Complex& l : eigenvalues) {
    if (std::abs(l.real()) < kZeroRealPart) {
      ++zero;
      if (std::abs(l.imag()) >= kZeroRealPart) oscillatory_zero = true;
    } else if (l.real() < 0.0) {
      ++negative;
    } else {
      ++positive;
    }
  }
  if (zero == 0) {
    if (positive == 0) return FixedPointKind::Sink;
    if (negative == 0) return FixedPointKind::Source;
    return FixedPointKind::Saddle;
  }
  if (negative == 0 && positive == 0 && oscillatory_zero) return FixedPointKind::Center;
  return FixedPointKind::NonHyperbolic;
}

std::vector<Complex> jacobian_eigenvalues(const FlowMatrix& j) {
  const Eigen::MatrixXd dense = j;
  Eigen::EigenSolver<Eigen::MatrixXd> es(dense, false);
  if (es.info() != Eigen::Success) throw AnalysisError("jacobian_eigenvalues: solver failed");
  std::vector<Complex> out;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) out.push_back(es.eigenvalues()(k));
  std::sort(out.begin(), out.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

FixedPointReport classify_point(const FlowSpec& spec, const FlowVector& state) {
  FixedPointReport r;
  r.location = state;
  r.jacobian_eigenvalues = jacobian_eigenvalues(analytic_jacobian(spec, state));
  r.classification = classify_spectrum(r.jacobian_eigenvalues);
  return r;
}

std::vector<FixedPointReport> fixed_points(const FlowSpec& spec) {
  check_spec(spec);
  std::vector<FixedPointReport> out;
  if (spec.variant == FlowVariant::Normalized3d) {
    if (spec.gamma > 0.0) {
      out.push_back(classify_point(spec, vec({0.0, 0.0, 1.0})));
      out.push_back(classify_point(spec, vec({0.0, 0.0, -1.0})));
      return out;
    }
    FixedPointReport line = classify_point(spec, vec({0.0, 0.0, 0.0}));
    line.member_classification = line.classification;
    line.classification = FixedPointKind::LineOfFixedPoints;
    line.line_direction = vec({0.0, 0.0, 1.0});
    out.push_back(line);
    return out;
  }
  FixedPointReport line = classify_point(spec, vec({0.0, 0.0, 1.0, 1.0}));
  line.member_classification = line.classification;
  line.classification = FixedPointKind::LineOfFixedPoints;
  line.line_direction = vec({0.0, 0.0, std::sqrt(0.5), std::sqrt(0.5)});
  out.push_back(line);
  return out;
}

FlowTrajectory integrate_flow(const FlowSpec& spec, const FlowVector& start, double t0, double t1,
                              const IntegratorControl& ctrl) {
  check_spec(spec);
  check_arity(spec, start);
  FlowTrajectory out;
  using State = Eigen::Vector4d;
  // Padding the 3-d flow with a frozen fourth coordinate keeps one fixed-size state type.
  State y0 = State::Zero();
  y0.head(start.size()) = start;
  const int n = spec.arity();
  const auto rhs = [&spec, n](double, double, const State& y) -> State {
    State d = State::Zero();
    d.head(n) = flow_rhs(spec, FlowVector(y.head(n)));
    return d;
  };
  const auto hygiene = [](double, State&) { return false; };
  const auto sampler = [&out, n](double t, const State& y) {
    out.times.push_back(t);
    out.states.emplace_back(y.head(n));
  };
  StepControl sc;
  sc.rel_tol = ctrl.rel_tol;
  sc.abs_tol = ctrl.abs_tol;
  sc.max_step = ctrl.max_step > 0.0 ? ctrl.max_step : (t1 - t0) / 100.0;
  const double dt = ctrl.sample_every > 0.0 ? ctrl.sample_every : (t1 - t0) / 400.0;
  integrate_dp5<State>(rhs, hygiene, sampler, y0, t0, t1, {}, sample_grid(t0, t1, dt), sc);
  return out;
}

ConsistencyReport verify_bloch_consistency(const SplitHamiltonian& h, const DensityMatrix& rho0,
                                           double t0, double t1, const IntegratorControl& ctrl) {
  if (h.dim() != 2 || rho0.dim() != 2) throw DimensionError("verify_bloch_consistency: requires N = 2");
  const double gamma = h.anti_hermitian(1, 1).real();
  const ComplexMatrix expected_a = (gamma / 2.0) * (identity(2) - pauli_z());
  if (max_abs_diff(h.hermitian, pauli_z()) > 1e-12 || max_abs_diff(h.anti_hermitian, expected_a) > 1e-12 ||
      gamma < 0.0) {
    throw ValidationError(
        "verify_bloch_consistency: H must be sigma_z - i (g/2)(I - sigma_z) with g >= 0");
  }
  const FlowSpec spec{FlowVariant::Normalized3d, gamma};
  const BlochState b0 = to_bloch(rho0);
  const FlowTrajectory flow = integrate_flow(spec, vec({b0.x, b0.y, b0.z}), t0, t1, ctrl);
  const Trajectory dens = evolve_ode(SwitchedHamiltonian::constant(h.full), rho0, t0, t1, ctrl);
  if (flow.times.size() != dens.size()) {
    throw AnalysisError("verify_bloch_consistency: sample grids differ");
  }
  ConsistencyReport r;
  r.gamma = gamma;
  for (std::size_t i = 0; i < dens.size(); ++i) {
    const BlochState b = dens.bloch(i);
    const FlowVector& f = flow.states[i];
    r.max_deviation = std::max({r.max_deviation, std::abs(b.x - f(0)), std::abs(b.y - f(1)),
                                std::abs(b.z - f(2))});
  }
  r.final_density = dens.bloch(dens.size() - 1);
  const FlowVector& last = flow.states.back();
  r.final_flow = {last(0), last(1), last(2)};
  return r;
}

std::vector<FieldSample> phase_portrait(const FlowSpec& spec, int points_per_axis) {
  if (points_per_axis < 2) throw ValidationError("phase_portrait: need at least 2 points per axis");
  std::vector<FieldSample> out;
  const double step = 2.0 / (points_per_axis - 1);
  for (int i = 0; i < points_per_axis; ++i) {
    for (int j = 0; j < points_per_axis; ++j) {
      for (int k = 0; k < points_per_axis; ++k) {
        const double x = -1.0 + i * step;
        const double y = -1.0 + j * step;
        const double z = -1.0 + k * step;
        if (x * x + y * y + z * z > 1.0 + 1e-12) continue;
        FlowVector p = spec.variant == FlowVariant::Normalized3d ? vec({x, y, z}) : vec({x, y, z, 1.0});
        out.push_back({p, flow_rhs(spec, p)});
      }
    }
  }
  return out;
}

}  // namespace nhm
