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

#include <doctest.h>

#include <cmath>

#include "nhm/errors.hpp"
#include "nhm/matrix_core.hpp"
#include "support/hp_expm.hpp"
#include "support/oracles.hpp"

using namespace nhm;
using nhm::testing::Gen;
using nhm::testing::max_abs;

namespace {

const Complex I1(0.0, 1.0);

ComplexMatrix diag2(Complex a, Complex b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("mat_exp of the zero matrix is the identity") {
  for (int n = 2; n <= kMaxDim; ++n) {
    CHECK(max_abs(mat_exp(ComplexMatrix::Zero(n, n)) - identity(n)) == 0.0);
  }
}

TEST_CASE("mat_exp of diag(i pi, -i pi) is -I") {
  const ComplexMatrix e = mat_exp(diag2(I1 * M_PI, -I1 * M_PI));
  CHECK(max_abs(e + identity(2)) < 1e-15);
}

TEST_CASE("mat_exp of -i sigma_z t matches the Taylor oracle") {
  const double t = 0.3;
  const ComplexMatrix a = -I1 * t * pauli_z();
  const ComplexMatrix e = mat_exp(a);
  CHECK(max_abs(e - diag2(std::exp(-I1 * t), std::exp(I1 * t))) < 1e-15);
  CHECK(max_abs(e - nhm::testing::taylor_expm(a)) < 1e-12);
}

TEST_CASE("mat_exp relative accuracy against 50-digit oracle up to norm 50") {
  Gen g(11);
  for (int trial = 0; trial < 24; ++trial) {
    const int n = g.integer(2, 6);
    ComplexMatrix a = g.disk_matrix(n);
    // Anti-Hermitian-heavy inputs keep e^A well scaled at large norm; the
    // general ones stay moderate so the comparison is relative.
    const double scale = trial < 12 ? g.uniform(0.1, 5.0) : g.uniform(5.0, 50.0);
    if (trial >= 12) a = 0.5 * (a - a.adjoint()) + 0.05 * a;
    a *= scale / a.cwiseAbs().colwise().sum().maxCoeff();
    const ComplexMatrix ref = nhm::testing::taylor_expm(a);
    const double rel = max_abs(mat_exp(a) - ref) / max_abs(ref);
    CAPTURE(trial);
    CAPTURE(scale);
    CHECK(rel < 1e-12);
  }
}

TEST_CASE("mat_exp splits over commuting diagonal pairs") {
  Gen g(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = g.integer(2, 8);
    ComplexMatrix a = ComplexMatrix::Zero(n, n), b = ComplexMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k) {
      a(k, k) = 3.0 * g.unit_disk();
      b(k, k) = 3.0 * g.unit_disk();
    }
    const ComplexMatrix lhs = mat_exp(a + b);
    CHECK(max_abs(lhs - mat_exp(a) * mat_exp(b)) < 1e-11 * std::max(1.0, max_abs(lhs)));
  }
}

TEST_CASE("mat_exp rejects non-finite input") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 1) = std::nan("");
  CHECK_THROWS_AS(mat_exp(a), ValidationError);
}

TEST_CASE("DensityMatrix validation thresholds") {
  ComplexMatrix m = diag2(0.5, 0.5);
  SUBCASE("small asymmetry is hermitized") {
    m(0, 1) = 1e-11;
    const DensityMatrix rho(m);
    CHECK(rho(0, 1) == rho(1, 0));
  }
  SUBCASE("asymmetry above 1e-10 is rejected") {
    m(0, 1) = 1e-9;
    CHECK_THROWS_AS(DensityMatrix{m}, InvalidStateError);
  }
  SUBCASE("trace error above 1e-10 is rejected") {
    m(0, 0) += 1e-9;
    CHECK_THROWS_AS(DensityMatrix{m}, InvalidStateError);
  }
  SUBCASE("eigenvalue below -1e-9 is rejected") {
    m = diag2(1.0 + 1e-8, -1e-8);
    CHECK_THROWS_AS(DensityMatrix{m}, InvalidStateError);
  }
  SUBCASE("eigenvalue at -1e-10 is accepted") {
    m = diag2(1.0 + 1e-10, -1e-10);
    CHECK_NOTHROW(DensityMatrix{m});
  }
  SUBCASE("dimension outside [2, 8] is rejected") {
    CHECK_THROWS_AS(DensityMatrix::maximally_mixed(1), DimensionError);
    CHECK_THROWS_AS(DensityMatrix::maximally_mixed(9), DimensionError);
  }
  SUBCASE("NaN is rejected") {
    m(1, 1) = std::nan("");
    CHECK_THROWS_AS(DensityMatrix{m}, ValidationError);
  }
}

TEST_CASE("PureStateAmplitudes normalization") {
  CHECK_NOTHROW(PureStateAmplitudes(Complex(0.6, 0.0), Complex(0.0, 0.8)));
  CHECK_THROWS_AS(PureStateAmplitudes(Complex(0.6, 0.0), Complex(0.8, 1e-6)), InvalidStateError);
  const auto a = PureStateAmplitudes::from_probability(0.7);
  CHECK(a.p0() == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(a.swapped().p0() == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("to_bloch on reference states") {
  const BlochState north = to_bloch(DensityMatrix::basis_state(2, 0));
  CHECK(north == BlochState{0.0, 0.0, 1.0});
  const BlochState centre = to_bloch(DensityMatrix::maximally_mixed(2));
  CHECK(centre.norm() == 0.0);
  const double s = 1.0 / std::sqrt(2.0);
  const auto plus = PureStateAmplitudes(s, s).density();
  const BlochState b = to_bloch(plus);
  // r_x = c1 c2* + c1* c2, r_y = i(c1 c2* - c1* c2), r_z = |c1|^2 - |c2|^2
  CHECK(b.x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(b.y) < 1e-15);
  CHECK(std::abs(b.z) < 1e-15);
  CHECK_THROWS_AS(to_bloch(DensityMatrix::maximally_mixed(3)), DimensionError);
}

TEST_CASE("to_bloch matches the amplitude expressions for complex amplitudes") {
  Gen g(3);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexVector v = g.state_vector(2);
    const Complex c1 = v(0), c2 = v(1);
    const BlochState b = to_bloch(DensityMatrix::pure(v));
    CHECK(std::abs(b.x - (c1 * std::conj(c2) + std::conj(c1) * c2).real()) < 1e-12);
    CHECK(std::abs(b.y - (I1 * (c1 * std::conj(c2) - std::conj(c1) * c2)).real()) < 1e-12);
    CHECK(std::abs(b.z - (std::norm(c1) - std::norm(c2))) < 1e-12);
  }
}

TEST_CASE("from_bloch on reference points") {
  CHECK(max_abs(from_bloch({0, 0, -1}).matrix() - diag2(0, 1)) < 1e-15);
  CHECK(max_abs(from_bloch({0, 0, 0}).matrix() - 0.5 * identity(2)) < 1e-15);
  ComplexMatrix plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  CHECK(max_abs(from_bloch({1, 0, 0}).matrix() - plus) < 1e-15);
  CHECK_THROWS_AS(from_bloch({0.8, 0.7, 0.0}), InvalidStateError);
  CHECK_THROWS_AS(from_bloch({std::nan(""), 0.0, 0.0}), ValidationError);
}

TEST_CASE("to_bloch and from_bloch are mutually inverse") {
  Gen g(17);
  for (int trial = 0; trial < 200; ++trial) {
    const BlochState b = g.bloch();
    const BlochState back = to_bloch(from_bloch(b));
    CHECK(std::abs(back.x - b.x) < 1e-12);
    CHECK(std::abs(back.y - b.y) < 1e-12);
    CHECK(std::abs(back.z - b.z) < 1e-12);
    const DensityMatrix rho = g.mixed(2);
    CHECK(max_abs(from_bloch(to_bloch(rho)).matrix() - rho.matrix()) < 1e-12);
  }
}

TEST_CASE("overlap") {
  Gen g(23);
  const DensityMatrix p = g.pure(3);
  CHECK(overlap(p, p) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(overlap(DensityMatrix::basis_state(2, 0), DensityMatrix::basis_state(2, 1)) == 0.0);
  for (int trial = 0; trial < 20; ++trial) {
    CHECK(overlap(DensityMatrix::maximally_mixed(2), g.mixed(2)) == doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK_THROWS_AS(overlap(g.pure(2), g.pure(3)), DimensionError);
}

TEST_CASE("population") {
  CHECK(population(DensityMatrix::maximally_mixed(4), 2) == doctest::Approx(0.25));
  CHECK(population(DensityMatrix::basis_state(2, 0), 1) == 0.0);
  CHECK_THROWS_AS(population(DensityMatrix::maximally_mixed(2), 2), ValidationError);
  // Two-level state pushed by diag(1 + 2i, -1) for t = 1 from equal amplitudes:
  // populations e^{4}:1, so p0 = 1 / (1 + e^{-4}).
  const ComplexMatrix u = mat_exp(-I1 * diag2(Complex(1.0, 2.0), -1.0));
  const double s = 1.0 / std::sqrt(2.0);
  ComplexMatrix n = u * PureStateAmplitudes(s, s).density().matrix() * u.adjoint();
  n /= n.trace().real();
  hermitize(n);
  CHECK(population(DensityMatrix(n), 0) == doctest::Approx(1.0 / (1.0 + std::exp(-4.0))).epsilon(1e-13));
  CHECK(population(DensityMatrix(n), 0) == doctest::Approx(0.982014).epsilon(1e-6));
}

TEST_CASE("populations sum to the trace") {
  Gen g(29);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix rho = g.mixed(g.integer(2, 8));
    double s = 0.0;
    for (int k = 0; k < rho.dim(); ++k) s += population(rho, k);
    CHECK(std::abs(s - rho.matrix().trace().real()) < 1e-12);
  }
}

TEST_CASE("unitary conjugation preserves purity") {
  Gen g(31);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = g.integer(2, 8);
    const DensityMatrix rho = g.mixed(n);
    const ComplexMatrix u = mat_exp(-I1 * g.hermitian(n, 3.0));
    ComplexMatrix m = u * rho.matrix() * u.adjoint();
    hermitize(m);
    CHECK(std::abs(DensityMatrix(m).purity() - rho.purity()) < 1e-9);
  }
}

TEST_CASE("min_eigenvalue of a nearly pure qubit keeps relative accuracy") {
  // Eigenvalues 1 - 1e-20 and 1e-20 rotated away from the diagonal.
  const double tiny = 1e-20;
  const double c = std::cos(0.3), s = std::sin(0.3);
  ComplexMatrix r(2, 2);
  r << c, -s, s, c;
  const ComplexMatrix m = r * diag2(1.0 - tiny, tiny) * r.transpose();
  CHECK(std::abs(min_eigenvalue(m)) < 1e-15);
  CHECK(min_eigenvalue(diag2(1.0, 1e-200)) == doctest::Approx(1e-200));
}

TEST_CASE("trace_distance") {
  CHECK(trace_distance(diag2(1, 0), diag2(0, 1)) == doctest::Approx(1.0));
  Gen g(37);
  const DensityMatrix a = g.mixed(3);
  CHECK(trace_distance(a.matrix(), a.matrix()) < 1e-15);
}
