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

// Independent reference computations shared by the test binaries.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "nhm/matrix_core.hpp"

namespace nhm::testing {

// Hand-rolled generators over a seeded mt19937_64.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

  // Uniform in the closed unit disk.
  Complex unit_disk() {
    const double r = std::sqrt(uniform(0.0, 1.0));
    const double phi = uniform(0.0, 2.0 * M_PI);
    return std::polar(r, phi);
  }

  ComplexMatrix disk_matrix(int n) {
    ComplexMatrix m(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) m(r, c) = unit_disk();
    }
    return m;
  }

  ComplexMatrix hermitian(int n, double scale = 1.0) {
    ComplexMatrix a = disk_matrix(n);
    return scale * 0.5 * (a + a.adjoint());
  }

  ComplexVector state_vector(int n) {
    ComplexVector v(n);
    for (int k = 0; k < n; ++k) v(k) = Complex(normal(), normal());
    return v / v.norm();
  }

  DensityMatrix pure(int n) { return DensityMatrix::pure(state_vector(n)); }

  // W W^dagger / Tr over a Ginibre W: full-rank mixed state.
  DensityMatrix mixed(int n) {
    ComplexMatrix w(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) w(r, c) = Complex(normal(), normal());
    }
    ComplexMatrix m = w * w.adjoint();
    m /= m.trace().real();
    hermitize(m);
    return DensityMatrix(m);
  }

  BlochState bloch(double max_radius = 1.0) {
    double x, y, z;
    do {
      x = uniform(-1.0, 1.0);
      y = uniform(-1.0, 1.0);
      z = uniform(-1.0, 1.0);
    } while (x * x + y * y + z * z > 1.0);
    return {max_radius * x, max_radius * y, max_radius * z};
  }

  BlochState sphere_point() {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * M_PI);
    const double r = std::sqrt(1.0 - z * z);
    return {r * std::cos(phi), r * std::sin(phi), z};
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Composite Simpson rule on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

// Trace, hermiticity and positivity checks against the density-matrix contract.
struct StateCheck {
  double trace_error = 0.0;
  double hermiticity = 0.0;
  double min_eigenvalue = 0.0;
};

inline StateCheck check_state(const ComplexMatrix& m) {
  ComplexMatrix h = m;
  hermitize(h);
  return {std::abs(m.trace().real() - 1.0) + std::abs(m.trace().imag()), hermiticity_defect(m),
          min_eigenvalue(h)};
}

}  // namespace nhm::testing
