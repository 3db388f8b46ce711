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

#include "nhm/evolution.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "nhm/errors.hpp"

namespace nhm {

namespace {

constexpr Complex kI{0.0, 1.0};

// Entries below this are flushed to zero so long collapses never crawl
// through subnormal arithmetic.
constexpr double kFlushBelow = 1e-280;

template <class Mat>
void flush_tiny(Mat& y) {
  for (Eigen::Index c = 0; c < y.cols(); ++c) {
    for (Eigen::Index r = 0; r < y.rows(); ++r) {
      Complex& v = y(r, c);
      const double re = std::abs(v.real()) < kFlushBelow ? 0.0 : v.real();
      const double im = std::abs(v.imag()) < kFlushBelow ? 0.0 : v.imag();
      v = Complex(re, im);
    }
  }
}

template <class Mat>
void hermitize_in_place(Mat& y) {
  const Mat h = 0.5 * (y + y.adjoint());
  y = h;
}

template <class Mat>
double min_eig(const Mat& y) {
  if (y.rows() == 2) {
    const double a = y(0, 0).real();
    const double d = y(1, 1).real();
    // det / lambda_max avoids the cancellation in mean - radius when one
    // eigenvalue is tiny.
    const double half_gap = 0.5 * (a - d);
    const double lmax = 0.5 * (a + d) + std::sqrt(half_gap * half_gap + std::norm(y(0, 1)));
    const double det = a * d - std::norm(y(0, 1));
    return lmax > 0.0 ? det / lmax : 0.5 * (a + d) - (lmax - 0.5 * (a + d));
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(y, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

template <class Mat>
void clip_negative(Mat& y, double lmin) {
  if (y.rows() == 2) {
    // Shifting both eigenvalues keeps the eigenvectors exact and touches
    // nothing below the size of the correction.
    for (Eigen::Index k = 0; k < 2; ++k) y(k, k) -= lmin;
    y /= 1.0 - 2.0 * lmin;
    return;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(y);
  auto lambda = es.eigenvalues();
  for (Eigen::Index k = 0; k < lambda.size(); ++k) lambda(k) = std::max(lambda(k), 0.0);
  Mat out = es.eigenvectors() * lambda.template cast<Complex>().asDiagonal() *
            es.eigenvectors().adjoint();
  out /= out.trace().real();
  y = out;
}

template <class Mat>
struct NormalizedHygiene {
  double drift_limit;
  TrajectoryDiagnostics* diag;

  bool operator()(double t, Mat& y) const {
    flush_tiny(y);
    hermitize_in_place(y);
    const double tr = y.trace().real();
    if (!std::isfinite(tr) || tr <= 0.0) throw IntegrationError("non-finite or vanishing trace", t);
    const double drift = std::abs(tr - 1.0);
    diag->max_trace_drift = std::max(diag->max_trace_drift, drift);
    if (drift > drift_limit) {
      throw IntegrationError("trace drift " + std::to_string(drift) + " exceeds limit", t);
    }
    y /= tr;
    const double lmin = min_eig(y);
    if (lmin < 0.0) {
      if (lmin < -drift_limit) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3g", lmin);
        throw IntegrationError(std::string("loss of positivity (eigenvalue ") + buf + ")", t);
      }
      diag->max_clipped = std::max(diag->max_clipped, -lmin);
      clip_negative(y, lmin);
      return true;
    }
    // Rescaling and symmetrizing move y by rounding only, so the integrator
    // may keep its first-same-as-last stage.
    return false;
  }
};

template <class Mat>
struct RawHygiene {
  bool operator()(double, Mat& y) const {
    flush_tiny(y);
    hermitize_in_place(y);
    return false;
  }
};

// H(t) assembled from cached pieces in the engine's matrix type.
template <class Mat>
struct HamiltonianPieces {
  const SwitchedHamiltonian* h;
  Mat base;
  Mat gain;
  Mat modulated;

  explicit HamiltonianPieces(const SwitchedHamiltonian& sh)
      : h(&sh), base(sh.base()), gain(sh.gain()), modulated(sh.modulated_gain()) {}

  Mat operator()(double t, double regime) const {
    const auto w = h->weights(t, regime);
    Mat out = w.base * base;
    if (w.gain != 0.0) out += w.gain * gain;
    if (w.modulated != 0.0) out += w.modulated * modulated;
    return out;
  }
};

// Same field as rhs_nonlinear, rewritten with A = H rho: for Hermitian rho,
// rho H^dagger = A^dagger and Tr(rho H_a) = -Im Tr(A).
template <class Mat>
Mat nonlinear_rhs(const Mat& h, const Mat& rho) {
  const Mat a = h * rho;
  const double weight = -2.0 * a.trace().imag();
  return -kI * (a - a.adjoint()) + weight * rho;
}

template <class Mat>
Mat linear_rhs(const Mat& h, const Mat& rho) {
  const Mat a = h * rho;
  return -kI * (a - a.adjoint());
}

void check_span(const SwitchedHamiltonian& h, const DensityMatrix& rho0, double t0, double t1) {
  if (h.dim() != rho0.dim()) throw DimensionError("evolve: Hamiltonian and state dimensions differ");
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t0 < t1)) {
    throw ValidationError("evolve: requires finite t0 < t1");
  }
}

StepControl step_control(const IntegratorControl& ctrl, double span) {
  StepControl sc;
  sc.rel_tol = ctrl.rel_tol;
  sc.abs_tol = ctrl.abs_tol;
  sc.max_step = ctrl.max_step > 0.0 ? ctrl.max_step : span / 100.0;
  return sc;
}

std::vector<double> samples_for(const IntegratorControl& ctrl, double t0, double t1,
                                std::span<const double> extra) {
  const double dt = ctrl.sample_every > 0.0 ? ctrl.sample_every : (t1 - t0) / 400.0;
  return sample_grid(t0, t1, dt, extra);
}

template <class Mat, bool Normalized>
Trajectory run_engine(const SwitchedHamiltonian& h, const DensityMatrix& rho0, double t0, double t1,
                      const IntegratorControl& ctrl, std::span<const double> extra) {
  Trajectory traj(Normalized);
  const HamiltonianPieces<Mat> pieces(h);
  const auto rhs = [&pieces](double t, double regime, const Mat& rho) -> Mat {
    if constexpr (Normalized) {
      return nonlinear_rhs<Mat>(pieces(t, regime), rho);
    } else {
      return linear_rhs<Mat>(pieces(t, regime), rho);
    }
  };
  const auto sampler = [&traj](double t, const Mat& y) {
    try {
      traj.push(t, ComplexMatrix(y));
    } catch (const InvalidStateError& e) {
      throw IntegrationError(e.what(), t);
    }
  };
  const StepControl sc = step_control(ctrl, t1 - t0);
  const Mat y0 = rho0.matrix();
  StepStats stats;
  if constexpr (Normalized) {
    const NormalizedHygiene<Mat> hygiene{std::max(1e-8, 1e3 * ctrl.rel_tol), &traj.diagnostics};
    stats = integrate_dp5<Mat>(rhs, hygiene, sampler, y0, t0, t1, h.breakpoints(t0, t1),
                               samples_for(ctrl, t0, t1, extra), sc);
  } else {
    stats = integrate_dp5<Mat>(rhs, RawHygiene<Mat>{}, sampler, y0, t0, t1, h.breakpoints(t0, t1),
                               samples_for(ctrl, t0, t1, extra), sc);
  }
  traj.diagnostics.accepted_steps = stats.accepted;
  traj.diagnostics.rejected_steps = stats.rejected;
  traj.diagnostics.rhs_evaluations = stats.evaluations;
  return traj;
}

// cos(pt) and sin(pt)/p, both even in p.
Complex cos_kernel(Complex p, double t) {
  const Complex x = p * t;
  if (std::abs(x) < 1e-4) {
    const Complex x2 = x * x;
    return 1.0 - x2 / 2.0 + x2 * x2 / 24.0 - x2 * x2 * x2 / 720.0;
  }
  return std::cos(x);
}

Complex sinc_kernel(Complex p, double t) {
  const Complex x = p * t;
  if (std::abs(x) < 1e-4) {
    const Complex x2 = x * x;
    return t * (1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0);
  }
  return std::sin(x) / p;
}

}  // namespace

// ---------------------------------------------------------------------------
// Trajectory

void Trajectory::push(double t, const ComplexMatrix& state) {
  if (!std::isfinite(t)) throw ValidationError("Trajectory: non-finite time");
  if (!times_.empty() && !(t > times_.back())) {
    throw ValidationError("Trajectory: times must be strictly increasing");
  }
  if (!states_.empty() && state.rows() != states_.front().rows()) {
    throw DimensionError("Trajectory: state dimension changed");
  }
  require_finite(state, "Trajectory state");
  if (normalized_) {
    const DensityMatrix rho(state);
    states_.push_back(rho.matrix());
  } else {
    ComplexMatrix s = state;
    hermitize(s);
    states_.push_back(s);
  }
  times_.push_back(t);
}

void Trajectory::add_reference(std::string name, const DensityMatrix& rho) {
  if (!states_.empty() && rho.dim() != dim()) throw DimensionError("add_reference: dimension mismatch");
  references_.emplace_back(std::move(name), rho);
}

int Trajectory::dim() const {
  if (states_.empty()) throw ValidationError("Trajectory: empty");
  return static_cast<int>(states_.front().rows());
}

const ComplexMatrix& Trajectory::final_state() const {
  if (states_.empty()) throw ValidationError("Trajectory: empty");
  return states_.back();
}

DensityMatrix Trajectory::density(std::size_t i) const {
  if (!normalized_) {
    const ComplexMatrix& s = states_.at(i);
    return DensityMatrix(s / s.trace().real());
  }
  return DensityMatrix(states_.at(i));
}

RealVector Trajectory::populations(std::size_t i) const {
  const ComplexMatrix& s = states_.at(i);
  return s.diagonal().real();
}

double Trajectory::population(std::size_t i, int k) const {
  const ComplexMatrix& s = states_.at(i);
  if (k < 0 || k >= s.rows()) throw ValidationError("population: index out of range");
  return s(k, k).real();
}

double Trajectory::purity(std::size_t i) const {
  const ComplexMatrix& s = states_.at(i);
  return (s * s).trace().real();
}

double Trajectory::trace(std::size_t i) const { return states_.at(i).trace().real(); }

BlochState Trajectory::bloch(std::size_t i) const { return bloch_components(states_.at(i)); }

double Trajectory::overlap(std::size_t i, std::size_t r) const {
  return (states_.at(i) * references_.at(r).second.matrix()).trace().real();
}

// ---------------------------------------------------------------------------
// Right-hand sides

ComplexMatrix rhs_nonlinear(const SplitHamiltonian& h, const ComplexMatrix& rho) {
  if (h.dim() != rho.rows() || rho.rows() != rho.cols()) {
    throw DimensionError("rhs_nonlinear: dimension mismatch");
  }
  const ComplexMatrix& hh = h.hermitian;
  const ComplexMatrix& ha = h.anti_hermitian;
  const Complex weight = 2.0 * (rho * ha).trace();
  return -kI * (hh * rho - rho * hh) - (ha * rho + rho * ha) + weight * rho;
}

ComplexMatrix rhs_nonlinear(const SplitHamiltonian& h, const DensityMatrix& rho) {
  return rhs_nonlinear(h, rho.matrix());
}

ComplexMatrix rhs_unnormalized(const SplitHamiltonian& h, const ComplexMatrix& rho) {
  if (h.dim() != rho.rows() || rho.rows() != rho.cols()) {
    throw DimensionError("rhs_unnormalized: dimension mismatch");
  }
  const ComplexMatrix& hh = h.hermitian;
  const ComplexMatrix& ha = h.anti_hermitian;
  return -kI * (hh * rho - rho * hh) - (ha * rho + rho * ha);
}

std::vector<double> sample_grid(double t0, double t1, double dt, std::span<const double> extra) {
  if (!(t0 < t1)) throw ValidationError("sample_grid: requires t0 < t1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("sample_grid: step must be positive");
  std::vector<double> out;
  const double span = t1 - t0;
  const auto n = static_cast<long long>(std::ceil(span / dt - 1e-9));
  out.reserve(static_cast<std::size_t>(n) + 1 + extra.size());
  for (long long k = 0; k < n; ++k) out.push_back(t0 + static_cast<double>(k) * dt);
  out.push_back(t1);
  for (double e : extra) {
    if (e >= t0 && e <= t1) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  std::vector<double> merged;
  for (double t : out) {
    if (merged.empty() || t - merged.back() > 1e-12 * std::max(1.0, std::abs(t))) {
      merged.push_back(t);
    } else if (t == t1) {
      merged.back() = t1;
    }
  }
  return merged;
}

// ---------------------------------------------------------------------------
// Engines

Trajectory evolve_ode(const SwitchedHamiltonian& h, const DensityMatrix& rho0, double t0, double t1,
                      const IntegratorControl& ctrl, std::span<const double> extra_samples) {
  check_span(h, rho0, t0, t1);
  if (h.dim() == 2) return run_engine<Eigen::Matrix2cd, true>(h, rho0, t0, t1, ctrl, extra_samples);
  return run_engine<ComplexMatrix, true>(h, rho0, t0, t1, ctrl, extra_samples);
}

Trajectory evolve_unnormalized(const SwitchedHamiltonian& h, const DensityMatrix& rho0, double t0,
                               double t1, const IntegratorControl& ctrl,
                               std::span<const double> extra_samples) {
  check_span(h, rho0, t0, t1);
  if (h.dim() == 2) return run_engine<Eigen::Matrix2cd, false>(h, rho0, t0, t1, ctrl, extra_samples);
  return run_engine<ComplexMatrix, false>(h, rho0, t0, t1, ctrl, extra_samples);
}

ComplexMatrix propagate_unnormalized(const ComplexMatrix& h, const ComplexMatrix& rho0, double t) {
  if (h.rows() != h.cols() || h.rows() != rho0.rows() || rho0.rows() != rho0.cols()) {
    throw DimensionError("propagate_unnormalized: dimension mismatch");
  }
  if (!std::isfinite(t)) throw ValidationError("propagate_unnormalized: non-finite time");
  const ComplexMatrix u = mat_exp(ComplexMatrix(-kI * t * h));
  return u * rho0 * u.adjoint();
}

DensityMatrix evolve_closed_form(const ComplexMatrix& h, const DensityMatrix& rho0, double t) {
  if (h.rows() != h.cols() || h.rows() != rho0.dim()) {
    throw DimensionError("evolve_closed_form: dimension mismatch");
  }
  require_finite(h, "evolve_closed_form");
  if (!std::isfinite(t)) throw ValidationError("evolve_closed_form: non-finite time");
  // Shifting H by i s I rescales e^{-iHt} by e^{st}, which the normalization
  // removes; it keeps the exponential in range for strongly growing modes.
  double shift = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < h.rows(); ++k) shift = std::max(shift, h(k, k).imag());
  if (t < 0.0) {
    shift = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < h.rows(); ++k) shift = std::min(shift, h(k, k).imag());
  }
  const ComplexMatrix shifted = h - (kI * shift) * identity(static_cast<int>(h.rows()));
  ComplexMatrix u = mat_exp(ComplexMatrix(-kI * t * shifted));
  if (!is_finite(u)) throw DegenerateEvolutionError("evolve_closed_form: propagator overflow");
  const double scale = u.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw DegenerateEvolutionError("evolve_closed_form: propagator vanished");
  u /= scale;
  ComplexMatrix n = u * rho0.matrix() * u.adjoint();
  hermitize(n);
  const double tr = n.trace().real();
  const double log_denominator = std::log(tr) + 2.0 * shift * t + 2.0 * std::log(scale);
  if (!(tr > 0.0) || log_denominator < std::log(1e-300)) {
    throw DegenerateEvolutionError("evolve_closed_form: state annihilated (trace below 1e-300)");
  }
  return DensityMatrix(n / tr);
}

// ---------------------------------------------------------------------------
// Two-level closed form

TwoLevelParams TwoLevelParams::from_matrix(const ComplexMatrix& h) {
  if (h.rows() != 2 || h.cols() != 2) throw DimensionError("TwoLevelParams: requires a 2x2 matrix");
  require_finite(h, "TwoLevelParams");
  TwoLevelParams p;
  p.r0 = 0.5 * (h(0, 0) + h(1, 1));
  p.r[0] = 0.5 * (h(0, 1) + h(1, 0));
  p.r[1] = 0.5 * kI * (h(0, 1) - h(1, 0));
  p.r[2] = 0.5 * (h(0, 0) - h(1, 1));
  return p;
}

ComplexMatrix TwoLevelParams::matrix() const {
  return r0 * identity(2) + r[0] * pauli_x() + r[1] * pauli_y() + r[2] * pauli_z();
}

ComplexMatrix two_level_numerator(const TwoLevelParams& params, const DensityMatrix& rho0, double t) {
  if (rho0.dim() != 2) throw DimensionError("two_level_numerator: requires N = 2");
  const ComplexMatrix rs = params.r[0] * pauli_x() + params.r[1] * pauli_y() + params.r[2] * pauli_z();
  const ComplexMatrix rs_conj = std::conj(params.r[0]) * pauli_x() +
                                std::conj(params.r[1]) * pauli_y() +
                                std::conj(params.r[2]) * pauli_z();
  const Complex rr = params.r[0] * params.r[0] + params.r[1] * params.r[1] + params.r[2] * params.r[2];
  const Complex p = std::sqrt(rr);
  const Complex q = std::sqrt(std::conj(rr));
  const Complex cp = cos_kernel(p, t);
  const Complex cq = cos_kernel(q, t);
  const Complex sp = sinc_kernel(p, t);
  const Complex sq = sinc_kernel(q, t);
  const ComplexMatrix& m = rho0.matrix();
  // (1/2) e^{-i(R0 - R0*)t} applied to I + r.sigma = 2 rho0.
  const double growth = std::exp(2.0 * params.r0.imag() * t);
  ComplexMatrix n = cp * cq * m + kI * cp * sq * (m * rs_conj) - kI * cq * sp * (rs * m) +
                    sp * sq * (rs * m * rs_conj);
  return growth * n;
}

DensityMatrix evolve_two_level(const TwoLevelParams& params, const DensityMatrix& rho0, double t) {
  if (rho0.dim() != 2) throw DimensionError("evolve_two_level: requires N = 2");
  // The scalar growth factor cancels in the ratio; it is applied only to the
  // annihilation check so that it cannot overflow the matrix entries.
  TwoLevelParams unit = params;
  unit.r0 = Complex(params.r0.real(), 0.0);
  ComplexMatrix n = two_level_numerator(unit, rho0, t);
  hermitize(n);
  const double tr = n.trace().real();
  if (!std::isfinite(tr)) throw DegenerateEvolutionError("evolve_two_level: numerator overflow");
  const double log_tr = std::log(tr) + 2.0 * params.r0.imag() * t;
  if (!(tr > 0.0) || log_tr < std::log(1e-300)) {
    throw DegenerateEvolutionError("evolve_two_level: Tr N(t) below 1e-300");
  }
  return DensityMatrix(n / tr);
}

// ---------------------------------------------------------------------------
// Printed case formulas

ComplexMatrix case_formula(CaseFormula which, double lambda1, double lambda2, double gamma,
                           const PureStateAmplitudes& c, double t) {
  if (!(gamma > 0.0)) throw ValidationError("case_formula: gamma must be positive");
  const double omega = 0.5 * (lambda1 - lambda2);
  const double a2 = c.p0();
  const double b2 = c.p1();
  const Complex coh = c.c1() * std::conj(c.c2()) * std::exp(Complex(0.0, -2.0 * omega * t));
  ComplexMatrix m(2, 2);

  const auto c2_matrix = [&]() {
    m(0, 0) = a2;
    m(0, 1) = std::exp(-gamma * t) * coh;
    m(1, 0) = std::conj(m(0, 1));
    m(1, 1) = b2 * std::exp(-2.0 * gamma * t);
  };

  switch (which) {
    case CaseFormula::A:
      m(0, 0) = a2 / (a2 + b2 * std::exp(-4.0 * gamma * t));
      m(0, 1) = coh / (a2 * std::exp(2.0 * gamma * t) + b2 * std::exp(-2.0 * gamma * t));
      m(1, 0) = std::conj(m(0, 1));
      m(1, 1) = b2 / (a2 * std::exp(4.0 * gamma * t) + b2);
      break;
    case CaseFormula::B:
      m(0, 0) = a2 / (a2 + b2 * std::exp(-2.0 * gamma * t));
      m(0, 1) = coh / (a2 * std::exp(gamma * t) + b2 * std::exp(-gamma * t));
      m(1, 0) = std::conj(m(0, 1));
      m(1, 1) = b2 / (a2 * std::exp(2.0 * gamma * t) + b2);
      break;
    case CaseFormula::C1: {
      c2_matrix();
      const double tr = m.trace().real();
      m /= tr;
      break;
    }
    case CaseFormula::C2:
      c2_matrix();
      break;
  }
  return m;
}

}  // namespace nhm
