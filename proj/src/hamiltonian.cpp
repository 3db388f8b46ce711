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

#include "nhm/hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "nhm/errors.hpp"

namespace nhm {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ValidationError(std::string(what) + " must be a finite positive number");
  }
}

ComplexMatrix diag4(double a, double b, double c, double d) {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  m(3, 3) = d;
  return m;
}

}  // namespace

SplitHamiltonian split(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) throw DimensionError("split: matrix not square");
  require_finite(h, "split");
  SplitHamiltonian s;
  s.full = h;
  s.hermitian = 0.5 * (h + h.adjoint());
  s.anti_hermitian = (0.5 * kI) * (h - h.adjoint());
  return s;
}

// ---------------------------------------------------------------------------
// SwitchingProfile

SwitchingProfile::SwitchingProfile(SwitchKind kind, double sharpness, double t_i, double t_f)
    : kind_(kind), sharpness_(sharpness), t_i_(t_i), t_f_(t_f) {
  if (kind_ == SwitchKind::AlwaysOn) return;
  if (!std::isfinite(t_i_) || !std::isfinite(t_f_) || !(t_i_ < t_f_)) {
    throw ValidationError("SwitchingProfile: requires finite t_i < t_f");
  }
  if (kind_ == SwitchKind::TanhWindow) require_positive(sharpness_, "switching sharpness");
}

SwitchingProfile SwitchingProfile::tanh_window(double sharpness, double t_i, double t_f) {
  return {SwitchKind::TanhWindow, sharpness, t_i, t_f};
}

SwitchingProfile SwitchingProfile::hard_window(double t_i, double t_f) {
  return {SwitchKind::HardWindow, 0.0, t_i, t_f};
}

SwitchingProfile SwitchingProfile::always_on() {
  return {SwitchKind::AlwaysOn, 0.0, -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
}

double SwitchingProfile::operator()(double t) const { return value(t, t); }

double SwitchingProfile::value(double t, double regime) const {
  switch (kind_) {
    case SwitchKind::TanhWindow:
      return 0.5 * (std::tanh(sharpness_ * (t - t_i_)) - std::tanh(sharpness_ * (t - t_f_)));
    case SwitchKind::HardWindow:
      return (regime >= t_i_ && regime < t_f_) ? 1.0 : 0.0;
    case SwitchKind::AlwaysOn:
      return 1.0;
  }
  return 0.0;
}

std::vector<double> SwitchingProfile::breakpoints(double t0, double t1) const {
  std::vector<double> out;
  if (kind_ != SwitchKind::HardWindow) return out;
  for (double b : {t_i_, t_f_}) {
    if (b > t0 && b < t1) out.push_back(b);
  }
  return out;
}

// ---------------------------------------------------------------------------
// HiddenVariableWave

HiddenVariableWave::HiddenVariableWave(double p0, int partitions, double t_i, double t_f,
                                       WaveMode mode, int fourier_terms)
    : p0_(p0),
      partitions_(partitions),
      t_i_(t_i),
      t_f_(t_f),
      mode_(mode),
      fourier_terms_(fourier_terms),
      half_period_(0.0) {
  if (!(p0_ >= 0.0 && p0_ <= 1.0)) throw ValidationError("HiddenVariableWave: p0 outside [0, 1]");
  if (partitions_ < 2 || partitions_ % 2 != 0) {
    throw ValidationError("HiddenVariableWave: partition count must be even and >= 2");
  }
  if (!std::isfinite(t_i_) || !std::isfinite(t_f_) || !(t_i_ < t_f_)) {
    throw ValidationError("HiddenVariableWave: requires finite t_i < t_f");
  }
  if (mode_ == WaveMode::Fourier && fourier_terms_ < 1) {
    throw ValidationError("HiddenVariableWave: Fourier truncation order must be >= 1");
  }
  half_period_ = (t_f_ - t_i_) / partitions_;

  if (mode_ == WaveMode::Fourier) {
    const double l = half_period_;
    const double t0 = t_i_;
    const double t1 = t_i_ + 2.0 * l * p0_;
    const double t2 = t_i_ + 2.0 * l;
    cos_coeffs_.resize(static_cast<std::size_t>(fourier_terms_) + 1, 0.0);
    sin_coeffs_.resize(static_cast<std::size_t>(fourier_terms_) + 1, 0.0);
    for (int m = 1; m <= fourier_terms_; ++m) {
      const double k = m * std::numbers::pi;
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      const double pre = 2.0 / k;
      cos_coeffs_[m] =
          pre * (std::sin(k / l * t1) - sign * std::sin(k / (2.0 * l) * (t0 + t2)));
      sin_coeffs_[m] =
          pre * (-std::cos(k / l * t1) + sign * std::cos(k / (2.0 * l) * (t0 + t2)));
    }
  }
}

double HiddenVariableWave::cosine_coefficient(int m) const {
  if (mode_ != WaveMode::Fourier || m < 1 || m > fourier_terms_) {
    throw ValidationError("cosine_coefficient: order outside the truncated series");
  }
  return cos_coeffs_[static_cast<std::size_t>(m)];
}

double HiddenVariableWave::sine_coefficient(int m) const {
  if (mode_ != WaveMode::Fourier || m < 1 || m > fourier_terms_) {
    throw ValidationError("sine_coefficient: order outside the truncated series");
  }
  return sin_coeffs_[static_cast<std::size_t>(m)];
}

double HiddenVariableWave::operator()(double t) const {
  if (!(t >= t_i_ && t <= t_f_)) throw ValidationError("g_eval: t outside [t_i, t_f]");
  return value(t);
}

double HiddenVariableWave::value(double t) const {
  return mode_ == WaveMode::ExactSquare ? square(t) : series(t);
}

double HiddenVariableWave::square(double t) const {
  if (p0_ >= 1.0) return 1.0;
  if (p0_ <= 0.0) return -1.0;
  const double period = 2.0 * half_period_;
  const double shifted = t - t_i_;
  const double phase = shifted - std::floor(shifted / period) * period;
  return phase < period * p0_ ? 1.0 : -1.0;
}

double HiddenVariableWave::series(double t) const {
  double g = 2.0 * p0_ - 1.0;
  const double w = std::numbers::pi * t / half_period_;
  for (int m = 1; m <= fourier_terms_; ++m) {
    g += cos_coeffs_[m] * std::cos(m * w) + sin_coeffs_[m] * std::sin(m * w);
  }
  return g;
}

std::vector<double> HiddenVariableWave::partition() const {
  std::vector<double> out;
  out.push_back(t_i_);
  for (int n = 0; n < partitions_ / 2; ++n) {
    const double start = t_i_ + (2.0 * n) * half_period_;
    const double mid = t_i_ + (2.0 * n + 2.0 * p0_) * half_period_;
    const double end = (n + 1 == partitions_ / 2) ? t_f_ : t_i_ + (2.0 * n + 2.0) * half_period_;
    if (mid > start && mid < end) out.push_back(mid);
    out.push_back(end);
  }
  return out;
}

std::vector<double> HiddenVariableWave::jump_times(double t0, double t1) const {
  std::vector<double> out;
  if (mode_ != WaveMode::ExactSquare || p0_ <= 0.0 || p0_ >= 1.0 || !(t0 < t1)) return out;
  const double period = 2.0 * half_period_;
  const auto k_lo = static_cast<long long>(std::floor((t0 - t_i_) / period)) - 1;
  const auto k_hi = static_cast<long long>(std::ceil((t1 - t_i_) / period)) + 1;
  for (long long k = k_lo; k <= k_hi; ++k) {
    const double base = t_i_ + static_cast<double>(2 * k) * half_period_;
    for (double b : {base, t_i_ + (static_cast<double>(2 * k) + 2.0 * p0_) * half_period_}) {
      if (b > t0 && b < t1) out.push_back(b);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// SwitchedHamiltonian

SwitchedHamiltonian::SwitchedHamiltonian(ComplexMatrix base, ComplexMatrix gain,
                                         SwitchingProfile profile, bool base_in_window)
    : base_(std::move(base)),
      gain_(std::move(gain)),
      profile_(profile),
      base_in_window_(base_in_window) {
  if (base_.rows() != base_.cols() || gain_.rows() != base_.rows() ||
      gain_.cols() != base_.cols()) {
    throw DimensionError("SwitchedHamiltonian: base and gain must be square and equal-sized");
  }
  if (base_.rows() < 1 || base_.rows() > kMaxDim) {
    throw DimensionError("SwitchedHamiltonian: dimension outside [1, 8]");
  }
  require_finite(base_, "SwitchedHamiltonian base");
  require_finite(gain_, "SwitchedHamiltonian gain");
  if (hermiticity_defect(base_) > 1e-12) {
    throw ValidationError("SwitchedHamiltonian: base must be Hermitian");
  }
  modulated_gain_ = ComplexMatrix::Zero(base_.rows(), base_.cols());
}

SwitchedHamiltonian SwitchedHamiltonian::constant(const ComplexMatrix& h) {
  const SplitHamiltonian s = split(h);
  return {s.hermitian, -kI * s.anti_hermitian, SwitchingProfile::always_on()};
}

SwitchedHamiltonian SwitchedHamiltonian::with_modulation(ComplexMatrix modulated_gain,
                                                         HiddenVariableWave wave) const {
  if (modulated_gain.rows() != base_.rows() || modulated_gain.cols() != base_.cols()) {
    throw DimensionError("with_modulation: dimension mismatch");
  }
  require_finite(modulated_gain, "modulated gain");
  SwitchedHamiltonian out = *this;
  out.modulated_gain_ = std::move(modulated_gain);
  out.wave_ = std::move(wave);
  return out;
}

SwitchedHamiltonian::Weights SwitchedHamiltonian::weights(double t, double regime) const {
  const double f = profile_.value(t, regime);
  Weights w;
  w.base = base_in_window_ ? 1.0 : 1.0 - f;
  w.gain = f;
  if (wave_ && f != 0.0) {
    const double g =
        wave_->mode() == WaveMode::ExactSquare ? wave_->value(regime) : wave_->value(t);
    w.modulated = f * g;
  }
  return w;
}

ComplexMatrix SwitchedHamiltonian::eval(double t, double regime) const {
  const Weights w = weights(t, regime);
  ComplexMatrix h = w.base * base_;
  if (w.gain != 0.0) h += w.gain * gain_;
  if (w.modulated != 0.0) h += w.modulated * modulated_gain_;
  return h;
}

ComplexMatrix SwitchedHamiltonian::window_hamiltonian() const {
  double mid = 0.0;
  if (profile_.kind() != SwitchKind::AlwaysOn) {
    mid = 0.5 * (profile_.t_i() + profile_.t_f());
  } else if (wave_) {
    mid = 0.5 * (wave_->t_i() + wave_->t_f());
  }
  ComplexMatrix h = base_in_window_ ? base_ : ComplexMatrix::Zero(base_.rows(), base_.cols());
  h += gain_;
  if (wave_) h += wave_->value(mid) * modulated_gain_;
  return h;
}

std::vector<double> SwitchedHamiltonian::breakpoints(double t0, double t1) const {
  std::vector<double> out = profile_.breakpoints(t0, t1);
  if (wave_) {
    const auto jumps = wave_->jump_times(t0, t1);
    out.insert(out.end(), jumps.begin(), jumps.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Builders

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

std::vector<ComplexVector> z_basis() {
  ComplexVector zero(2), one(2);
  zero << 1.0, 0.0;
  one << 0.0, 1.0;
  return {zero, one};
}

std::vector<ComplexVector> x_basis() {
  const double r = std::numbers::sqrt2 / 2.0;
  ComplexVector plus(2), minus(2);
  plus << r, r;
  minus << r, -r;
  return {plus, minus};
}

SwitchedHamiltonian measurement_hamiltonian(std::span<const ComplexVector> eigenbasis,
                                            std::span<const double> eigenvalues, int target,
                                            double gamma, const SwitchingProfile& profile) {
  const auto n = static_cast<int>(eigenbasis.size());
  if (n < 2 || n > kMaxDim) throw DimensionError("measurement_hamiltonian: basis size outside [2, 8]");
  if (static_cast<int>(eigenvalues.size()) != n) {
    throw DimensionError("measurement_hamiltonian: eigenvalue count != basis size");
  }
  if (target < 0 || target >= n) throw ValidationError("measurement_hamiltonian: target out of range");
  require_positive(gamma, "gamma");
  for (int i = 0; i < n; ++i) {
    if (eigenbasis[i].size() != n) throw DimensionError("measurement_hamiltonian: vector size");
    if (!std::isfinite(eigenvalues[i])) throw ValidationError("measurement_hamiltonian: eigenvalue");
    for (int j = 0; j < n; ++j) {
      const Complex ip = eigenbasis[i].dot(eigenbasis[j]);
      if (std::abs(ip - (i == j ? 1.0 : 0.0)) > 1e-10) {
        throw ValidationError("measurement_hamiltonian: basis not orthonormal");
      }
    }
  }
  ComplexMatrix base = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) base += eigenvalues[i] * projector(eigenbasis[i]);
  hermitize(base);
  ComplexMatrix gain = (kI * gamma) * projector(eigenbasis[target]);
  return {base, gain, profile};
}

SwitchedHamiltonian two_level_pm(int sign, double gamma, const SwitchingProfile& profile) {
  if (sign != 1 && sign != -1) throw ValidationError("two_level_pm: sign must be +1 or -1");
  require_positive(gamma, "gamma");
  ComplexMatrix gain = (kI * (gamma / 2.0)) * (identity(2) + static_cast<double>(sign) * pauli_z());
  return {pauli_z(), gain, profile};
}

SwitchedHamiltonian degeneracy_case(DegeneracyCase which, double gamma,
                                    const SwitchingProfile& profile) {
  require_positive(gamma, "gamma");
  switch (which) {
    case DegeneracyCase::A:
      return {diag4(1, 2, 3, 4), (kI * gamma) * diag4(4, 3, 2, 1), profile};
    case DegeneracyCase::B:
      return {diag4(1, 1, 1, 4), (kI * gamma) * diag4(4, 3, 2, 1), profile};
    case DegeneracyCase::C:
      return {diag4(1, 2, 3, 4), (kI * gamma) * diag4(0, 0, -1, -1), profile};
  }
  throw ValidationError("degeneracy_case: unknown case");
}

SwitchedHamiltonian stochastic_hamiltonian(const PureStateAmplitudes& c, double gamma,
                                           const SwitchingProfile& profile,
                                           const HiddenVariableWave& wave) {
  require_positive(gamma, "gamma");
  if (std::abs(wave.p0() - c.p0()) > 1e-12) {
    throw ValidationError("stochastic_hamiltonian: wave p0 does not match |c1|^2");
  }
  SwitchedHamiltonian h(pauli_z(), (kI * (gamma / 2.0)) * identity(2), profile);
  return h.with_modulation((kI * (gamma / 2.0)) * pauli_z(), wave);
}

// ---------------------------------------------------------------------------
// Attractor prediction

AttractorPrediction attractor_prediction(const ComplexMatrix& h, double tol) {
  if (h.rows() != h.cols() || h.rows() < 1) throw DimensionError("attractor_prediction: not square");
  require_finite(h, "attractor_prediction");
  if (!(tol > 0.0)) throw ValidationError("attractor_prediction: tol must be positive");

  const Eigen::MatrixXcd dense = h;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(dense);
  if (solver.info() != Eigen::Success) throw AnalysisError("attractor_prediction: eigensolver failed");

  const Eigen::MatrixXcd& vecs = solver.eigenvectors();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vecs);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) < 1e-8 * sv(0)) {
    throw AnalysisError("attractor_prediction: matrix is defective (eigenvectors nearly dependent)");
  }

  const auto n = static_cast<int>(h.rows());
  struct Pair {
    int dominant;
    Complex value;
    ComplexVector vector;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    ComplexVector v = vecs.col(k);
    v /= v.norm();
    int dominant = 0;
    for (int r = 1; r < n; ++r) {
      if (std::abs(v(r)) > std::abs(v(dominant)) + 1e-12) dominant = r;
    }
    // Fix the global phase so the dominant component is real and positive.
    v *= std::conj(v(dominant)) / std::abs(v(dominant));
    pairs.push_back({dominant, solver.eigenvalues()(k), v});
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.dominant != b.dominant) return a.dominant < b.dominant;
    return a.value.real() > b.value.real();
  });

  AttractorPrediction out;
  for (const auto& p : pairs) {
    out.eigenvalues.push_back(p.value);
    out.eigenvectors.push_back(p.vector);
  }

  double im_max = -std::numeric_limits<double>::infinity();
  double im_min = std::numeric_limits<double>::infinity();
  for (const auto& l : out.eigenvalues) {
    im_max = std::max(im_max, l.imag());
    im_min = std::min(im_min, l.imag());
  }
  const double scale = tol * std::max(1.0, std::abs(im_max));
  if (im_max - im_min <= scale) {
    out.kind = AttractorKind::None;
    return out;
  }
  for (int k = 0; k < n; ++k) {
    if (im_max - out.eigenvalues[k].imag() <= scale) out.indices.push_back(k);
  }
  out.kind = out.indices.size() == 1 ? AttractorKind::Unique : AttractorKind::Degenerate;
  return out;
}

}  // namespace nhm
