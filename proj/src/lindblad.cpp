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

#include "nhm/lindblad.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "nhm/errors.hpp"
#include "nhm/integrator.hpp"

namespace nhm {

namespace {

constexpr Complex kI{0.0, 1.0};

template <class Mat>
struct LindbladPieces {
  Mat h;
  Mat effective;  // sum rate L^dagger L / 2
  std::vector<std::pair<Mat, double>> jumps;

  explicit LindbladPieces(const LindbladModel& m) : h(m.hamiltonian()) {
    effective = Mat::Zero(h.rows(), h.cols());
    for (const auto& j : m.jumps()) {
      const Mat l = j.op;
      jumps.emplace_back(l, j.rate);
      effective += (0.5 * j.rate) * (l.adjoint() * l);
    }
  }

  Mat operator()(const Mat& rho) const {
    Mat d = -kI * (h * rho - rho * h) - (effective * rho + rho * effective);
    for (const auto& [l, rate] : jumps) d += rate * (l * rho * l.adjoint());
    return d;
  }
};

template <class Mat>
Trajectory run_lindblad(const LindbladModel& m, const DensityMatrix& rho0, double t0, double t1,
                        const IntegratorControl& ctrl, std::span<const double> extra) {
  Trajectory traj(false);
  const LindbladPieces<Mat> pieces(m);
  const auto rhs = [&pieces](double, double, const Mat& rho) -> Mat { return pieces(rho); };
  const auto hygiene = [](double, Mat& y) {
    const Mat h = 0.5 * (y + y.adjoint());
    y = h;
    return true;
  };
  const auto sampler = [&traj](double t, const Mat& y) { traj.push(t, ComplexMatrix(y)); };
  StepControl sc;
  sc.rel_tol = ctrl.rel_tol;
  sc.abs_tol = ctrl.abs_tol;
  sc.max_step = ctrl.max_step > 0.0 ? ctrl.max_step : (t1 - t0) / 100.0;
  const double dt = ctrl.sample_every > 0.0 ? ctrl.sample_every : (t1 - t0) / 400.0;
  const StepStats stats = integrate_dp5<Mat>(rhs, hygiene, sampler, Mat(rho0.matrix()), t0, t1, {},
                                             sample_grid(t0, t1, dt, extra), sc);
  traj.diagnostics.accepted_steps = stats.accepted;
  traj.diagnostics.rejected_steps = stats.rejected;
  traj.diagnostics.rhs_evaluations = stats.evaluations;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    traj.diagnostics.max_trace_drift =
        std::max(traj.diagnostics.max_trace_drift, std::abs(traj.trace(i) - 1.0));
  }
  return traj;
}

ComplexMatrix diag2(Complex a, Complex b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

LindbladModel::LindbladModel(ComplexMatrix h, std::vector<JumpOperator> jumps)
    : h_(std::move(h)), jumps_(std::move(jumps)) {
  if (h_.rows() != h_.cols() || h_.rows() < 2 || h_.rows() > kMaxDim) {
    throw DimensionError("LindbladModel: Hamiltonian must be square with 2 <= N <= 8");
  }
  require_finite(h_, "LindbladModel Hamiltonian");
  if (hermiticity_defect(h_) > 1e-12) throw ValidationError("LindbladModel: H must be Hermitian");
  for (const auto& j : jumps_) {
    if (j.op.rows() != h_.rows() || j.op.cols() != h_.cols()) {
      throw DimensionError("LindbladModel: jump operator dimension mismatch");
    }
    require_finite(j.op, "LindbladModel jump operator");
    if (!(j.rate >= 0.0) || !std::isfinite(j.rate)) {
      throw ValidationError("LindbladModel: rates must be finite and >= 0");
    }
  }
}

ComplexMatrix LindbladModel::rhs(const ComplexMatrix& rho) const {
  if (rho.rows() != h_.rows() || rho.cols() != h_.cols()) throw DimensionError("Lindblad rhs: dimension");
  return LindbladPieces<ComplexMatrix>(*this)(rho);
}

Trajectory lindblad_evolve(const LindbladModel& m, const DensityMatrix& rho0, double t0, double t1,
                           const IntegratorControl& ctrl, std::span<const double> extra_samples) {
  if (m.dim() != rho0.dim()) throw DimensionError("lindblad_evolve: dimension mismatch");
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t0 < t1)) {
    throw ValidationError("lindblad_evolve: requires finite t0 < t1");
  }
  if (m.dim() == 2) return run_lindblad<Eigen::Matrix2cd>(m, rho0, t0, t1, ctrl, extra_samples);
  return run_lindblad<ComplexMatrix>(m, rho0, t0, t1, ctrl, extra_samples);
}

IncoherentSumResult incoherent_sum(double lambda1, double lambda2, double gamma,
                                   const PureStateAmplitudes& c, double t) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("incoherent_sum: gamma must be > 0");
  if (!std::isfinite(lambda1) || !std::isfinite(lambda2) || !std::isfinite(t)) {
    throw ValidationError("incoherent_sum: non-finite input");
  }
  const ComplexMatrix rho0 = c.density().matrix();
  const ComplexMatrix lower = propagate_unnormalized(diag2(lambda1, Complex(lambda2, -gamma)), rho0, t);
  const ComplexMatrix upper = propagate_unnormalized(diag2(Complex(lambda1, -gamma), lambda2), rho0, t);
  ComplexMatrix sum = lower + upper;
  hermitize(sum);
  const double tr = sum.trace().real();
  return {lower, upper, sum, tr, DensityMatrix(sum / tr)};
}

DephasingComparison compare_to_dephasing(double lambda1, double lambda2, double gamma,
                                         const PureStateAmplitudes& c, std::span<const double> t_grid,
                                         const IntegratorControl& ctrl) {
  if (!(gamma > 0.0)) throw ValidationError("compare_to_dephasing: gamma must be > 0");
  if (t_grid.empty()) throw ValidationError("compare_to_dephasing: empty time grid");
  std::vector<double> grid(t_grid.begin(), t_grid.end());
  if (!std::is_sorted(grid.begin(), grid.end()) || grid.front() < 0.0) {
    throw ValidationError("compare_to_dephasing: grid must be ascending and non-negative");
  }

  DephasingComparison out;
  const auto loss = [&grid, gamma](double rate) {
    double s = 0.0;
    for (double t : grid) {
      const double d = 1.0 / std::cosh(gamma * t) - std::exp(-rate * t);
      s += d * d;
    }
    return s;
  };
  std::uintmax_t iters = 200;
  out.gamma_eff = boost::math::tools::brent_find_minima(loss, 0.0, 10.0 * gamma, 40, iters).first;

  const LindbladModel model(diag2(lambda1, lambda2), {{pauli_z(), 0.5 * out.gamma_eff}});
  const DensityMatrix rho0 = c.density();
  const ComplexMatrix diagonal = diag2(c.p0(), c.p1());

  Trajectory lind(false);
  const double t_max = grid.back();
  if (t_max > 0.0) lind = lindblad_evolve(model, rho0, 0.0, t_max, ctrl, grid);

  std::size_t j = 0;
  for (double t : grid) {
    const IncoherentSumResult s = incoherent_sum(lambda1, lambda2, gamma, c, t);
    ComplexMatrix lrho = rho0.matrix();
    if (t > 0.0) {
      while (j < lind.size() && lind.time(j) < t - 1e-12 * std::max(1.0, t)) ++j;
      if (j == lind.size()) throw AnalysisError("compare_to_dephasing: missing Lindblad sample");
      lrho = lind.state(j);
    }
    DephasingRow row;
    row.t = t;
    row.raw_trace = s.raw_trace;
    row.population0 = s.normalized(0, 0).real();
    row.population1 = s.normalized(1, 1).real();
    row.coherence = std::abs(s.normalized(0, 1));
    row.lindblad_coherence = std::abs(lrho(0, 1));
    row.distance_to_lindblad = trace_distance(s.normalized.matrix(), lrho);
    row.distance_to_diagonal = trace_distance(s.normalized.matrix(), diagonal);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace nhm
