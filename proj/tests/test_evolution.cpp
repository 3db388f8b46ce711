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
#include "nhm/evolution.hpp"
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

DensityMatrix plus_state() {
  const double s = 1.0 / std::sqrt(2.0);
  return PureStateAmplitudes(s, s).density();
}

// The defining right-hand side, written out term by term.
ComplexMatrix printed_rhs(const ComplexMatrix& h, const ComplexMatrix& rho) {
  const ComplexMatrix hh = 0.5 * (h + h.adjoint());
  const ComplexMatrix ha = 0.5 * I1 * (h - h.adjoint());
  return -I1 * (hh * rho - rho * hh) - (ha * rho + rho * ha) + 2.0 * (rho * ha).trace() * rho;
}

SwitchedHamiltonian constant(const ComplexMatrix& h) { return SwitchedHamiltonian::constant(h); }

const ComplexMatrix fig1_h(double gamma) { return pauli_z() - I1 * (gamma / 2.0) * (identity(2) - pauli_z()); }

}  // namespace

TEST_CASE("rhs_nonlinear matches the term-by-term formula and is traceless") {
  Gen g(61);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = g.integer(2, 8);
    const ComplexMatrix h = 3.0 * g.disk_matrix(n);
    const DensityMatrix rho = g.mixed(n);
    const ComplexMatrix r = rhs_nonlinear(split(h), rho);
    CHECK(max_abs(r - printed_rhs(h, rho.matrix())) < 1e-12);
    CHECK(std::abs(r.trace()) < 1e-12);
    CHECK(hermiticity_defect(r) < 1e-12);
  }
}

TEST_CASE("rhs_nonlinear vanishes at eigenstates") {
  CHECK(max_abs(rhs_nonlinear(split(pauli_z()), DensityMatrix::basis_state(2, 0))) == 0.0);
  // Source of H+ at full switch is an equilibrium too.
  const ComplexMatrix hp = pauli_z() + I1 * 1.5 * (identity(2) + pauli_z());
  CHECK(max_abs(rhs_nonlinear(split(hp), DensityMatrix::basis_state(2, 1))) < 1e-15);
  CHECK(max_abs(rhs_nonlinear(split(hp), DensityMatrix::basis_state(2, 0))) < 1e-15);
}

TEST_CASE("Bloch projection of rhs_nonlinear is the qubit flow") {
  Gen g(67);
  for (int trial = 0; trial < 200; ++trial) {
    const double gamma = g.uniform(0.0, 10.0);
    const BlochState b = g.bloch();
    const BlochState d = bloch_components(rhs_nonlinear(split(fig1_h(gamma)), from_bloch(b)));
    CHECK(std::abs(d.x - (-2.0 * b.y - gamma * b.x * b.z)) < 1e-12);
    CHECK(std::abs(d.y - (2.0 * b.x - gamma * b.y * b.z)) < 1e-12);
    CHECK(std::abs(d.z - (-gamma * b.z * b.z + gamma)) < 1e-12);
  }
}

TEST_CASE("rhs_unnormalized is -i(H rho - rho H^dagger)") {
  Gen g(71);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = g.integer(2, 8);
    const ComplexMatrix h = g.disk_matrix(n);
    const DensityMatrix rho = g.mixed(n);
    const ComplexMatrix ref = -I1 * (h * rho.matrix() - rho.matrix() * h.adjoint());
    CHECK(max_abs(rhs_unnormalized(split(h), rho.matrix()) - ref) < 1e-12);
  }
}

TEST_CASE("evolve_ode with gamma = 0 circles the z axis with period pi") {
  const auto h = constant(fig1_h(0.0));
  const DensityMatrix rho0 = from_bloch({0.8, 0.0, 0.6});
  const Trajectory tr = evolve_ode(h, rho0, 0.0, M_PI);
  CHECK(max_abs(tr.final_state() - rho0.matrix()) < 1e-8);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const BlochState b = tr.bloch(i);
    CHECK(std::abs(b.z - 0.6) < 1e-9);
    CHECK(std::abs(std::hypot(b.x, b.y) - 0.8) < 1e-8);
    CHECK(std::abs(tr.purity(i) - 1.0) < 1e-8);
  }
}

TEST_CASE("evolve_ode with gamma = 3 spirals into the north pole") {
  Gen g(73);
  for (int trial = 0; trial < 10; ++trial) {
    BlochState b = g.sphere_point();
    if (b.z < -0.99) b = {0.1, 0.0, -0.9};
    const Trajectory tr = evolve_ode(constant(fig1_h(3.0)), from_bloch(b), 0.0, 5.0);
    CHECK(tr.bloch(tr.size() - 1).z > 0.999);
    for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr.bloch(i).z >= tr.bloch(i - 1).z - 1e-12);
  }
}

TEST_CASE("evolve_ode under H+ with a tanh window collapses |-> onto |0>") {
  const auto h = two_level_pm(+1, 3.0, SwitchingProfile::tanh_window(3.0, 7.0, 8.0));
  const double s = 1.0 / std::sqrt(2.0);
  const DensityMatrix minus = PureStateAmplitudes(s, -s).density();
  const Trajectory tr = evolve_ode(h, minus, 0.0, 13.0);
  CHECK(population(tr.density(tr.size() - 1), 0) >= 0.99);
  // Frozen-f oracle: one unit of full switch gives at least 1 - e^{-3}.
  const DensityMatrix frozen = evolve_closed_form(h.window_hamiltonian(), minus, 1.0);
  CHECK(population(frozen, 0) >= 1.0 - std::exp(-3.0));
}

TEST_CASE("evolve_ode across a hard window equals piecewise closed-form propagation") {
  const auto h = two_level_pm(+1, 3.0, SwitchingProfile::hard_window(7.0, 8.0));
  const DensityMatrix rho0 = plus_state();
  const Trajectory tr = evolve_ode(h, rho0, 0.0, 13.0);
  const DensityMatrix a = evolve_closed_form(pauli_z(), rho0, 7.0);
  const DensityMatrix b = evolve_closed_form(h.window_hamiltonian(), a, 1.0);
  const DensityMatrix c = evolve_closed_form(pauli_z(), b, 5.0);
  CHECK(max_abs(tr.final_state() - c.matrix()) < 1e-7);
}

TEST_CASE("evolve_ode sampling and diagnostics") {
  IntegratorControl ctrl;
  ctrl.sample_every = 0.1;
  const std::vector<double> extra{0.333};
  const Trajectory tr = evolve_ode(constant(fig1_h(1.0)), plus_state(), 0.0, 1.0, ctrl, extra);
  CHECK(tr.size() == 12);
  for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr.time(i) > tr.time(i - 1));
  CHECK(tr.time(0) == 0.0);
  CHECK(tr.time(tr.size() - 1) == 1.0);
  CHECK(tr.diagnostics.accepted_steps > 0);
  CHECK(tr.diagnostics.max_trace_drift < 1e-9);
  CHECK_THROWS_AS(evolve_ode(constant(fig1_h(1.0)), plus_state(), 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(evolve_ode(constant(fig1_h(1.0)), DensityMatrix::maximally_mixed(3), 0.0, 1.0),
                  DimensionError);
}

TEST_CASE("evolve_closed_form: sigma_z has period pi") {
  Gen g(79);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = g.mixed(2);
    CHECK(max_abs(evolve_closed_form(pauli_z(), rho, M_PI).matrix() - rho.matrix()) < 1e-12);
  }
}

TEST_CASE("evolve_closed_form: diag(1+3i, -1) from |+> at t = 2") {
  const DensityMatrix r = evolve_closed_form(diag2(Complex(1.0, 3.0), -1.0), plus_state(), 2.0);
  // populations scale as e^{6t} : 1
  CHECK(std::abs(population(r, 0) - 1.0 / (1.0 + std::exp(-12.0))) < 1e-15);
  CHECK(std::abs(population(r, 1) - std::exp(-12.0) / (1.0 + std::exp(-12.0))) < 1e-18);
  const double s = 1.0 / std::sqrt(2.0);
  const ComplexMatrix caseA = case_formula(CaseFormula::A, 1.0, -1.0, 1.5, PureStateAmplitudes(s, s), 2.0);
  CHECK(max_abs(r.matrix() - caseA) < 1e-14);
}

TEST_CASE("evolve_closed_form: four-level case a collapses from I/4") {
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) h(k, k) = Complex(k + 1.0, 3.0 * (4 - k));
  const DensityMatrix r = evolve_closed_form(h, DensityMatrix::maximally_mixed(4), 2.0);
  CHECK(population(r, 0) > 0.999);
}

TEST_CASE("evolve_closed_form matches the 50-digit propagator") {
  Gen g(83);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = g.integer(2, 8);
    const ComplexMatrix h = g.disk_matrix(n);
    const DensityMatrix rho = g.mixed(n);
    const double t = g.uniform(0.0, 5.0);
    const ComplexMatrix ref = nhm::testing::hp_normalized_propagation(h, rho.matrix(), t);
    CHECK(max_abs(evolve_closed_form(h, rho, t).matrix() - ref) < 1e-12);
  }
}

TEST_CASE("evolve_closed_form reduces to unitary conjugation for Hermitian H") {
  Gen g(89);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = g.integer(2, 6);
    const ComplexMatrix h = g.hermitian(n, 2.0);
    const DensityMatrix rho = g.mixed(n);
    const ComplexMatrix u = mat_exp(-I1 * 1.7 * h);
    CHECK(max_abs(evolve_closed_form(h, rho, 1.7).matrix() - u * rho.matrix() * u.adjoint()) < 1e-12);
  }
}

TEST_CASE("evolve_closed_form reports an annihilated state") {
  CHECK_THROWS_AS(evolve_closed_form(diag2(0.0, Complex(0.0, -1000.0)), DensityMatrix::basis_state(2, 1), 1.0),
                  DegenerateEvolutionError);
  // A growing mode is rescaled, not overflowed.
  CHECK_NOTHROW(evolve_closed_form(diag2(Complex(0.0, 400.0), 0.0), plus_state(), 10.0));
}

TEST_CASE("evolve_two_level: R = 0 leaves the state unchanged") {
  Gen g(97);
  const DensityMatrix rho = g.mixed(2);
  TwoLevelParams p;
  p.r0 = 0.7;
  CHECK(max_abs(evolve_two_level(p, rho, 3.0).matrix() - rho.matrix()) < 1e-15);
}

TEST_CASE("evolve_two_level reproduces the case A matrix") {
  Gen g(101);
  for (int trial = 0; trial < 30; ++trial) {
    const double l1 = g.uniform(-2.0, 2.0), l2 = g.uniform(-2.0, 2.0), gamma = g.uniform(0.1, 2.0);
    const double t = g.uniform(0.0, 3.0);
    const ComplexVector v = g.state_vector(2);
    const PureStateAmplitudes c(v(0), v(1));
    TwoLevelParams p;
    p.r0 = 0.5 * (l1 + l2);
    p.r = {0.0, 0.0, Complex(0.5 * (l1 - l2), gamma)};
    const ComplexMatrix ref = case_formula(CaseFormula::A, l1, l2, gamma, c, t);
    CHECK(max_abs(evolve_two_level(p, c.density(), t).matrix() - ref) < 1e-12);
  }
}

TEST_CASE("evolve_two_level matches evolve_closed_form for random complex R") {
  Gen g(103);
  for (int trial = 0; trial < 100; ++trial) {
    TwoLevelParams p;
    p.r0 = g.unit_disk();
    for (auto& r : p.r) r = g.unit_disk();
    const DensityMatrix rho = g.mixed(2);
    const double t = g.uniform(0.0, 5.0);
    CHECK(max_abs(evolve_two_level(p, rho, t).matrix() - evolve_closed_form(p.matrix(), rho, t).matrix()) <
          1e-10);
  }
}

TEST_CASE("evolve_two_level is continuous across the small-p series switch") {
  Gen g(107);
  for (double pt : {1e-7, 5e-5, 9.99e-5, 1.001e-4, 2e-4, 1e-3}) {
    TwoLevelParams p;
    p.r0 = g.unit_disk();
    p.r = {Complex(pt, 0.0), 0.0, 0.0};
    const DensityMatrix rho = g.mixed(2);
    CHECK(max_abs(evolve_two_level(p, rho, 1.0).matrix() - evolve_closed_form(p.matrix(), rho, 1.0).matrix()) <
          1e-12);
  }
  // R with R.R = 0 but R != 0 (p = 0 exactly, nilpotent part)
  TwoLevelParams p;
  p.r = {1.0, Complex(0.0, 1.0), 0.0};
  const DensityMatrix rho = g.mixed(2);
  CHECK(max_abs(evolve_two_level(p, rho, 0.3).matrix() - evolve_closed_form(p.matrix(), rho, 0.3).matrix()) < 1e-10);
}

TEST_CASE("TwoLevelParams round trip") {
  Gen g(109);
  const ComplexMatrix h = g.disk_matrix(2);
  CHECK(max_abs(TwoLevelParams::from_matrix(h).matrix() - h) < 1e-15);
}

TEST_CASE("evolve_unnormalized: decaying upper level") {
  const double s = 1.0 / std::sqrt(2.0);
  const DensityMatrix rho0 = PureStateAmplitudes(s, s).density();
  const auto h = constant(diag2(1.0, Complex(-1.0, -1.0)));
  const Trajectory tr = evolve_unnormalized(h, rho0, 0.0, 1.0);
  CHECK(!tr.normalized());
  const ComplexMatrix& f = tr.final_state();
  CHECK(std::abs(f(1, 1).real() - 0.5 * std::exp(-2.0)) < 1e-9);
  CHECK(std::abs(f(0, 0).real() - 0.5) < 1e-9);
  CHECK(std::abs(tr.trace(tr.size() - 1) - 0.5 * (1.0 + std::exp(-2.0))) < 1e-9);
  const Trajectory late = evolve_unnormalized(h, rho0, 0.0, 30.0);
  CHECK(max_abs(late.final_state() - diag2(0.5, 0.0)) < 1e-9);
  // Matches the closed form of the decaying branch.
  const ComplexMatrix c2 = case_formula(CaseFormula::C2, 1.0, -1.0, 1.0, PureStateAmplitudes(s, s), 1.0);
  CHECK(max_abs(f - c2) < 1e-9);
}

TEST_CASE("evolve_unnormalized keeps unit trace for Hermitian H") {
  Gen g(113);
  const Trajectory tr = evolve_unnormalized(constant(g.hermitian(3, 2.0)), g.mixed(3), 0.0, 5.0);
  for (std::size_t i = 0; i < tr.size(); ++i) CHECK(std::abs(tr.trace(i) - 1.0) < 1e-9);
}

TEST_CASE("case formulas at gamma = 1, t = 1 from equal amplitudes") {
  const double s = 1.0 / std::sqrt(2.0);
  const PureStateAmplitudes c(s, s);
  const ComplexMatrix a = case_formula(CaseFormula::A, 1.0, -1.0, 1.0, c, 1.0);
  CHECK(std::abs(a(0, 0).real() - 1.0 / (1.0 + std::exp(-4.0))) < 1e-15);
  CHECK(std::abs(a(1, 1).real() - 1.0 / (1.0 + std::exp(4.0))) < 1e-15);
  CHECK(std::abs(std::abs(a(0, 1)) - 0.5 / std::cosh(2.0)) < 1e-15);
  for (auto w : {CaseFormula::A, CaseFormula::B, CaseFormula::C1}) {
    CHECK(std::abs(case_formula(w, 1.0, -1.0, 1.0, c, 1.0).trace() - 1.0) < 1e-15);
  }
  CHECK(std::abs(case_formula(CaseFormula::C2, 1.0, -1.0, 1.0, c, 1.0).trace().real() -
                 0.5 * (1.0 + std::exp(-2.0))) < 1e-15);
  CHECK_THROWS_AS(case_formula(CaseFormula::A, 1.0, -1.0, 0.0, c, 1.0), ValidationError);
}

TEST_CASE("case identities: B = C1 and B at 2 gamma = A at gamma") {
  Gen g(127);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexVector v = g.state_vector(2);
    const PureStateAmplitudes c(v(0), v(1));
    const double l1 = g.uniform(-3, 3), l2 = g.uniform(-3, 3), gamma = g.uniform(0.05, 3.0), t = g.uniform(0, 4);
    const ComplexMatrix b = case_formula(CaseFormula::B, l1, l2, gamma, c, t);
    CHECK(max_abs(b - case_formula(CaseFormula::C1, l1, l2, gamma, c, t)) < 1e-15);
    CHECK(max_abs(case_formula(CaseFormula::B, l1, l2, 2.0 * gamma, c, t) -
                  case_formula(CaseFormula::A, l1, l2, gamma, c, t)) < 1e-12);
  }
}

TEST_CASE("case B and C2 agree with the propagators of their Hamiltonians") {
  Gen g(131);
  for (int trial = 0; trial < 30; ++trial) {
    const ComplexVector v = g.state_vector(2);
    const PureStateAmplitudes c(v(0), v(1));
    const double l1 = g.uniform(-3, 3), l2 = g.uniform(-3, 3), gamma = g.uniform(0.05, 3.0), t = g.uniform(0, 4);
    // B: diag(l1 + i gamma, l2) -> normalized; C2: diag(l1, l2 - i gamma) unnormalized.
    const DensityMatrix b = evolve_closed_form(diag2(Complex(l1, gamma), l2), c.density(), t);
    CHECK(max_abs(b.matrix() - case_formula(CaseFormula::B, l1, l2, gamma, c, t)) < 1e-12);
    const ComplexMatrix n = propagate_unnormalized(diag2(l1, Complex(l2, -gamma)), c.density().matrix(), t);
    CHECK(max_abs(n - case_formula(CaseFormula::C2, l1, l2, gamma, c, t)) < 1e-12);
  }
}

TEST_CASE("case A coherence for equal amplitudes is |c1 c2| / cosh(2 gamma t)") {
  const double s = 1.0 / std::sqrt(2.0);
  const PureStateAmplitudes c(s, Complex(0.0, s));
  double prev = 1.0;
  for (int k = 0; k < 50; ++k) {
    const double t = 0.04 * k;
    const double coh = std::abs(case_formula(CaseFormula::A, 0.3, -0.4, 1.3, c, t)(0, 1));
    CHECK(std::abs(coh - 0.5 / std::cosh(2.0 * 1.3 * t)) < 1e-10);
    CHECK(coh <= prev);
    prev = coh;
  }
}

TEST_CASE("cross-engine agreement for constant H") {
  Gen g(137);
  IntegratorControl ctrl;
  ctrl.rel_tol = 1e-9;
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + trial % 3;
    const ComplexMatrix h = g.disk_matrix(n);
    const DensityMatrix rho = g.mixed(n);
    const std::vector<double> ts{0.5, 1.0, 2.0, 5.0};
    const Trajectory tr = evolve_ode(constant(h), rho, 0.0, 5.0, ctrl, ts);
    for (std::size_t i = 0; i < tr.size(); ++i) {
      if (tr.time(i) == 0.0) continue;
      CHECK(max_abs(tr.state(i) - evolve_closed_form(h, rho, tr.time(i)).matrix()) < 1e-6);
    }
  }
}

TEST_CASE("sample_grid") {
  const auto g = sample_grid(0.0, 1.0, 0.25);
  CHECK(g == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  const std::vector<double> extra{0.5 + 1e-15, 0.6, 2.0};
  const auto h = sample_grid(0.0, 1.0, 0.25, extra);
  CHECK(h.size() == 6);
  CHECK_THROWS_AS(sample_grid(1.0, 0.0, 0.1), ValidationError);
}

TEST_CASE("Trajectory rejects non-increasing times and invalid states") {
  Trajectory tr;
  tr.push(0.0, DensityMatrix::maximally_mixed(2).matrix());
  CHECK_THROWS(tr.push(0.0, DensityMatrix::maximally_mixed(2).matrix()));
  CHECK_THROWS(tr.push(1.0, 2.0 * identity(2)));
  tr.add_reference("mixed", DensityMatrix::maximally_mixed(2));
  CHECK(tr.overlap(0, 0) == doctest::Approx(0.5));
}
