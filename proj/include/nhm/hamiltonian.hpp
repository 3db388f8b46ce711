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

// hamiltonian.hpp: Hermitian/anti-Hermitian splitting, switched measurement
// Hamiltonians, the hidden-variable square wave and attractor prediction.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nhm/matrix_core.hpp"

namespace nhm {

// H = hermitian - i * anti_hermitian, both parts Hermitian.
struct SplitHamiltonian {
  ComplexMatrix full;
  ComplexMatrix hermitian;
  ComplexMatrix anti_hermitian;

  int dim() const noexcept { return static_cast<int>(full.rows()); }
};

SplitHamiltonian split(const ComplexMatrix& h);

enum class SwitchKind { TanhWindow, HardWindow, AlwaysOn };

/// Switching function f(t) for the measurement window [t_i, t_f].
///
/// TanhWindow: f(t) = [tanh(s(t - t_i)) - tanh(s(t - t_f))] / 2 with sharpness s.
/// HardWindow: f = 1 on [t_i, t_f), 0 elsewhere.
/// AlwaysOn:   f = 1.
class SwitchingProfile {
 public:
  SwitchingProfile(SwitchKind kind, double sharpness, double t_i, double t_f);

  static SwitchingProfile tanh_window(double sharpness, double t_i, double t_f);
  static SwitchingProfile hard_window(double t_i, double t_f);
  static SwitchingProfile always_on();

  double operator()(double t) const;
  // Evaluates piecewise-constant profiles at `regime` instead of `t`.
  double value(double t, double regime) const;

  SwitchKind kind() const noexcept { return kind_; }
  double sharpness() const noexcept { return sharpness_; }
  double t_i() const noexcept { return t_i_; }
  double t_f() const noexcept { return t_f_; }

  // Discontinuities strictly inside (t0, t1).
  std::vector<double> breakpoints(double t0, double t1) const;

 private:
  SwitchKind kind_;
  double sharpness_;
  double t_i_;
  double t_f_;
};

enum class WaveMode { ExactSquare, Fourier };

/// Hidden-variable wave g(t) on [t_i, t_f] with N partitions.
///
/// Period 2L with L = (t_f - t_i) / N. g = +1 on [t_{2n}, t_{2n+1}) and -1 on
/// [t_{2n+1}, t_{2n+2}), where t_{2n} = t_i + 2nL and t_{2n+1} = t_{2n} + 2L p0,
/// so every +1/-1 dwell pair has length ratio p0 / (1 - p0). Fourier mode sums
/// the truncated series (2p0 - 1) + sum_{m<=M} a_m cos(m pi t / L) + b_m sin(m pi t / L).
class HiddenVariableWave {
 public:
  static constexpr int kDefaultFourierTerms = 51;

  HiddenVariableWave(double p0, int partitions, double t_i, double t_f,
                     WaveMode mode = WaveMode::ExactSquare,
                     int fourier_terms = kDefaultFourierTerms);

  // g(t) for t in [t_i, t_f]; ValidationError outside.
  double operator()(double t) const;
  // Periodic extension, valid for any t.
  double value(double t) const;

  double p0() const noexcept { return p0_; }
  int partitions() const noexcept { return partitions_; }
  double t_i() const noexcept { return t_i_; }
  double t_f() const noexcept { return t_f_; }
  WaveMode mode() const noexcept { return mode_; }
  int fourier_terms() const noexcept { return fourier_terms_; }
  double half_period() const noexcept { return half_period_; }
  double plus_dwell() const noexcept { return 2.0 * half_period_ * p0_; }
  double minus_dwell() const noexcept { return 2.0 * half_period_ * (1.0 - p0_); }

  double cosine_coefficient(int m) const;  // a_m
  double sine_coefficient(int m) const;    // b_m

  // {t_0 = t_i, t_1, t_2, ...} up to t_f, zero-length dwells removed.
  std::vector<double> partition() const;
  // Jump times of the square wave strictly inside (t0, t1); empty in Fourier mode.
  std::vector<double> jump_times(double t0, double t1) const;

 private:
  double square(double t) const;
  double series(double t) const;

  double p0_;
  int partitions_;
  double t_i_;
  double t_f_;
  WaveMode mode_;
  int fourier_terms_;
  double half_period_;
  std::vector<double> cos_coeffs_;
  std::vector<double> sin_coeffs_;
};

/// H(t) = B(t) + f(t) * (gain + g(t) * modulated_gain).
///
/// B(t) is the Hermitian base; when `base_in_window` is false the base is
/// faded out as (1 - f(t)) * base, which for a hard window reproduces a
/// Hamiltonian that is replaced outright during the measurement.
class SwitchedHamiltonian {
 public:
  SwitchedHamiltonian(ComplexMatrix base, ComplexMatrix gain, SwitchingProfile profile,
                      bool base_in_window = true);

  // Constant (possibly non-Hermitian) H, split into base and always-on gain.
  static SwitchedHamiltonian constant(const ComplexMatrix& h);

  SwitchedHamiltonian with_modulation(ComplexMatrix modulated_gain, HiddenVariableWave wave) const;

  // H(t) = base_weight * base + gain_weight * gain + modulated_weight * modulated_gain.
  struct Weights {
    double base = 1.0;
    double gain = 0.0;
    double modulated = 0.0;
  };
  Weights weights(double t, double regime) const;

  ComplexMatrix operator()(double t) const { return eval(t, t); }
  // Piecewise-constant pieces (hard window, square wave) are evaluated at `regime`.
  ComplexMatrix eval(double t, double regime) const;
  // Hamiltonian with the window fully on (f = 1, g taken at the window midpoint).
  ComplexMatrix window_hamiltonian() const;

  int dim() const noexcept { return static_cast<int>(base_.rows()); }
  const ComplexMatrix& base() const noexcept { return base_; }
  const ComplexMatrix& gain() const noexcept { return gain_; }
  const SwitchingProfile& profile() const noexcept { return profile_; }
  bool base_in_window() const noexcept { return base_in_window_; }
  const std::optional<HiddenVariableWave>& wave() const noexcept { return wave_; }
  const ComplexMatrix& modulated_gain() const noexcept { return modulated_gain_; }

  // All discontinuities strictly inside (t0, t1), sorted.
  std::vector<double> breakpoints(double t0, double t1) const;

 private:
  ComplexMatrix base_;
  ComplexMatrix gain_;
  SwitchingProfile profile_;
  bool base_in_window_;
  ComplexMatrix modulated_gain_;
  std::optional<HiddenVariableWave> wave_;
};

ComplexMatrix projector(const ComplexVector& v);

// Computational and sigma_x eigenbases of a qubit.
std::vector<ComplexVector> z_basis();
std::vector<ComplexVector> x_basis();

// sum_i lambda_i |phi_i><phi_i| + i gamma f(t) |phi_j><phi_j|
SwitchedHamiltonian measurement_hamiltonian(std::span<const ComplexVector> eigenbasis,
                                            std::span<const double> eigenvalues, int target,
                                            double gamma, const SwitchingProfile& profile);

// sigma_z + i (gamma / 2) f(t) (I + sign * sigma_z)
SwitchedHamiltonian two_level_pm(int sign, double gamma, const SwitchingProfile& profile);

enum class DegeneracyCase { A, B, C };

// 4x4 diagonal Hamiltonians: a = dia(1,2,3,4) + i g f dia(4,3,2,1),
// b = dia(1,1,1,4) + i g f dia(4,3,2,1), c = dia(1,2,3,4) + i g f dia(0,0,-1,-1).
SwitchedHamiltonian degeneracy_case(DegeneracyCase which, double gamma,
                                    const SwitchingProfile& profile);

// sigma_z + i (gamma / 2) f(t) (I + g(t) sigma_z)
SwitchedHamiltonian stochastic_hamiltonian(const PureStateAmplitudes& c, double gamma,
                                           const SwitchingProfile& profile,
                                           const HiddenVariableWave& wave);

enum class AttractorKind { Unique, Degenerate, None };

struct AttractorPrediction {
  AttractorKind kind = AttractorKind::None;
  // Eigen-indices achieving the largest imaginary part (one for Unique).
  std::vector<int> indices;
  // Eigenpairs ordered by the computational-basis index of each eigenvector's
  // dominant component, so a diagonal H keeps its diagonal order.
  std::vector<Complex> eigenvalues;
  std::vector<ComplexVector> eigenvectors;

  int index() const { return indices.at(0); }
};

inline constexpr double kAttractorTol = 1e-9;

// Classifies the largest-imaginary-part eigenvalue(s) of h. AnalysisError for
// defective matrices.
AttractorPrediction attractor_prediction(const ComplexMatrix& h, double tol = kAttractorTol);

}  // namespace nhm
