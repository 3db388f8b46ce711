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

#include "nhm/matrix_core.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

#include "nhm/errors.hpp"

namespace nhm {

namespace {

void require_density_dim(int n, const char* what) {
  if (n < 2 || n > kMaxDim) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(n) +
                         " outside [2, " + std::to_string(kMaxDim) + "]");
  }
}

}  // namespace

ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

bool is_finite(const ComplexMatrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) return false;
    }
  }
  return true;
}

void require_finite(const ComplexMatrix& m, std::string_view what) {
  if (!is_finite(m)) {
    throw ValidationError(std::string(what) + ": non-finite entry");
  }
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shape mismatch");
  }
  return (a - b).cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("hermiticity_defect: matrix not square");
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix mat_exp(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("mat_exp: matrix not square");
  require_finite(a, "mat_exp");
  Eigen::MatrixXcd dense = a;
  Eigen::MatrixXcd result = dense.exp();
  return result;
}

void hermitize(ComplexMatrix& m) {
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  m = h;
}

double min_eigenvalue(const ComplexMatrix& h) {
  if (h.rows() == 2) {
    const double a = h(0, 0).real();
    const double d = h(1, 1).real();
    // det / lambda_max avoids the cancellation in mean - radius when one
    // eigenvalue is tiny.
    const double half_gap = 0.5 * (a - d);
    const double lmax = 0.5 * (a + d) + std::sqrt(half_gap * half_gap + std::norm(h(0, 1)));
    const double det = a * d - std::norm(h(0, 1));
    return lmax > 0.0 ? det / lmax : 0.5 * (a + d) - (lmax - 0.5 * (a + d));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw AnalysisError("min_eigenvalue: solver failed");
  return solver.eigenvalues()(0);
}

DensityMatrix::DensityMatrix(const ComplexMatrix& m) : m_(m) {
  if (m_.rows() != m_.cols()) throw DimensionError("DensityMatrix: matrix not square");
  require_density_dim(static_cast<int>(m_.rows()), "DensityMatrix");
  require_finite(m_, "DensityMatrix");
  const double asym = hermiticity_defect(m_);
  if (asym > kConstructionTol) {
    throw InvalidStateError("DensityMatrix: not Hermitian (defect " + std::to_string(asym) + ")");
  }
  hermitize(m_);
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > kConstructionTol) {
    throw InvalidStateError("DensityMatrix: trace " + std::to_string(tr) + " != 1");
  }
  const double lmin = min_eigenvalue(m_);
  if (lmin < -kPositivityTol) {
    throw InvalidStateError("DensityMatrix: negative eigenvalue " + std::to_string(lmin));
  }
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double n = psi.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidStateError("pure: zero or non-finite vector");
  ComplexVector u = psi / n;
  return DensityMatrix(u * u.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  require_density_dim(dim, "maximally_mixed");
  return DensityMatrix(identity(dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::diagonal(const RealVector& populations) {
  ComplexMatrix m = ComplexMatrix::Zero(populations.size(), populations.size());
  for (Eigen::Index k = 0; k < populations.size(); ++k) m(k, k) = populations(k);
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::basis_state(int dim, int k) {
  require_density_dim(dim, "basis_state");
  if (k < 0 || k >= dim) throw ValidationError("basis_state: index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return DensityMatrix(m);
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

PureStateAmplitudes::PureStateAmplitudes(Complex c1, Complex c2) : c1_(c1), c2_(c2) {
  if (!std::isfinite(std::abs(c1)) || !std::isfinite(std::abs(c2))) {
    throw ValidationError("PureStateAmplitudes: non-finite amplitude");
  }
  const double norm = std::norm(c1) + std::norm(c2);
  if (std::abs(norm - 1.0) > 1e-12) {
    throw InvalidStateError("PureStateAmplitudes: |c1|^2 + |c2|^2 = " + std::to_string(norm));
  }
}

PureStateAmplitudes PureStateAmplitudes::from_probability(double p0) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw ValidationError("from_probability: p0 outside [0, 1]");
  return {Complex(std::sqrt(p0), 0.0), Complex(std::sqrt(1.0 - p0), 0.0)};
}

DensityMatrix PureStateAmplitudes::density() const {
  ComplexVector psi(2);
  psi << c1_, c2_;
  return DensityMatrix(psi * psi.adjoint());
}

double BlochState::norm() const { return std::sqrt(x * x + y * y + z * z); }

BlochState bloch_components(const ComplexMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw DimensionError("to_bloch: requires a 2x2 matrix");
  // Tr(m sx) = m01 + m10, Tr(m sy) = i(m01 - m10), Tr(m sz) = m00 - m11.
  return {(m(0, 1) + m(1, 0)).real(), (Complex(0.0, 1.0) * (m(0, 1) - m(1, 0))).real(),
          (m(0, 0) - m(1, 1)).real()};
}

BlochState to_bloch(const DensityMatrix& rho) { return bloch_components(rho.matrix()); }

DensityMatrix from_bloch(const BlochState& b) {
  if (!std::isfinite(b.x) || !std::isfinite(b.y) || !std::isfinite(b.z)) {
    throw ValidationError("from_bloch: non-finite coordinate");
  }
  if (b.norm() > 1.0 + 1e-9) throw InvalidStateError("from_bloch: |b| > 1");
  ComplexMatrix m = 0.5 * (identity(2) + b.x * pauli_x() + b.y * pauli_y() + b.z * pauli_z());
  return DensityMatrix(m);
}

double overlap(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("overlap: dimension mismatch");
  return (a.matrix() * b.matrix()).trace().real();
}

double population(const DensityMatrix& rho, int k) {
  if (k < 0 || k >= rho.dim()) throw ValidationError("population: index out of range");
  return rho(k, k).real();
}

double population(const DensityMatrix& rho, const ComplexVector& v) {
  if (v.size() != rho.dim()) throw DimensionError("population: vector dimension mismatch");
  return (v.adjoint() * rho.matrix() * v)(0, 0).real();
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("trace_distance: shape mismatch");
  }
  ComplexMatrix d = a - b;
  hermitize(d);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(d, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw AnalysisError("trace_distance: solver failed");
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace nhm
