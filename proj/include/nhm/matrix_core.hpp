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

// matrix_core.hpp: small dense complex matrices, density matrices and Bloch
// coordinates shared by every other module.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string_view>

namespace nhm {

using Complex = std::complex<double>;

inline constexpr int kMaxDim = 8;

// Dynamic extent with inline storage capped at kMaxDim; no heap traffic.
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using RealVector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

// Tolerance ladder.
inline constexpr double kConstructionTol = 1e-10;
inline constexpr double kPositivityTol = 1e-9;

ComplexMatrix identity(int dim);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

bool is_finite(const ComplexMatrix& m);
// Throws ValidationError naming `what` when any entry is NaN/Inf.
void require_finite(const ComplexMatrix& m, std::string_view what);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double hermiticity_defect(const ComplexMatrix& m);

// e^A. Backed by a scaling-and-squaring Pade kernel; relative error <= 1e-12 for ||A|| <= 50.
ComplexMatrix mat_exp(const ComplexMatrix& a);

/// Hermitian, unit-trace, positive semidefinite N x N matrix (2 <= N <= 8).
///
/// Construction hermitizes inputs whose asymmetry is below 1e-10; larger
/// asymmetry, trace error above 1e-10 or an eigenvalue below -1e-9 throws
/// InvalidStateError. Instances are immutable.
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& m);

  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix maximally_mixed(int dim);
  static DensityMatrix diagonal(const RealVector& populations);
  static DensityMatrix basis_state(int dim, int k);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  double purity() const;
  Complex operator()(int r, int c) const { return m_(r, c); }

 private:
  ComplexMatrix m_;
};

// c1|0> + c2|1> with |c1|^2 + |c2|^2 = 1 (within 1e-12).
class PureStateAmplitudes {
 public:
  PureStateAmplitudes(Complex c1, Complex c2);

  // Real, non-negative amplitudes with |c1|^2 = p0.
  static PureStateAmplitudes from_probability(double p0);

  Complex c1() const noexcept { return c1_; }
  Complex c2() const noexcept { return c2_; }
  double p0() const noexcept { return std::norm(c1_); }
  double p1() const noexcept { return std::norm(c2_); }
  PureStateAmplitudes swapped() const { return {c2_, c1_}; }
  DensityMatrix density() const;

  bool operator==(const PureStateAmplitudes&) const = default;

 private:
  Complex c1_;
  Complex c2_;
};

struct BlochState {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  bool operator==(const BlochState&) const = default;
};

BlochState to_bloch(const DensityMatrix& rho);
// Bloch projection without validation; works for unnormalized 2x2 matrices.
BlochState bloch_components(const ComplexMatrix& m);
DensityMatrix from_bloch(const BlochState& b);

// Tr(ab), real part; the imaginary part of a product of Hermitian matrices vanishes.
double overlap(const DensityMatrix& a, const DensityMatrix& b);
double population(const DensityMatrix& rho, int k);
// <v|rho|v> for a unit vector v.
double population(const DensityMatrix& rho, const ComplexVector& v);

// Half the trace norm of a - b for Hermitian a, b.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const ComplexMatrix& hermitian);

// In-place (m + m^dagger) / 2.
void hermitize(ComplexMatrix& m);

}  // namespace nhm
