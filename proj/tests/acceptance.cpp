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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any selected criterion fails.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nhm/bloch_dynamics.hpp"
#include "nhm/evolution.hpp"
#include "nhm/hamiltonian.hpp"
#include "nhm/io/config.hpp"
#include "nhm/io/serialize.hpp"
#include "nhm/lindblad.hpp"
#include "nhm/measurement.hpp"
#include "nhm/stochastic.hpp"
#include "support/golden.hpp"
#include "support/oracles.hpp"

using namespace nhm;
using nhm::testing::Gen;
using nhm::testing::max_abs;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void below(const std::string& what, double value, double bound) {
    const bool ok = value < bound;
    note(what, value, ok ? "<" : ">=", bound);
    pass = pass && ok;
  }
  void at_most(const std::string& what, double value, double bound) {
    const bool ok = value <= bound;
    note(what, value, ok ? "<=" : ">", bound);
    pass = pass && ok;
  }
  void above(const std::string& what, double value, double bound) {
    const bool ok = value > bound;
    note(what, value, ok ? ">" : "<=", bound);
    pass = pass && ok;
  }
  void at_least(const std::string& what, double value, double bound) {
    const bool ok = value >= bound;
    note(what, value, ok ? ">=" : "<", bound);
    pass = pass && ok;
  }
  void require(const std::string& what, bool ok) {
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (ok ? " ok" : " FAILED");
    pass = pass && ok;
  }

 private:
  void note(const std::string& what, double value, const char* op, double bound) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %.3g %s %.3g", what.c_str(), value, op, bound);
    if (detail.tellp() > 0) detail << "; ";
    detail << buf;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ComplexMatrix diag2(Complex a, Complex b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

ComplexMatrix fig1_h(double gamma) {
  return pauli_z() - Complex(0.0, gamma / 2.0) * (identity(2) - pauli_z());
}

// 1. constant H: ODE engine against the closed form
void cross_engine(Verdict& o) {
  const auto t0 = std::chrono::steady_clock::now();
  Gen g(1001);
  IntegratorControl ctrl;
  ctrl.rel_tol = 1e-9;
  const std::vector<double> times{0.5, 1.0, 2.0, 5.0};
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + k % 3;
    const ComplexMatrix h = g.disk_matrix(n);
    const DensityMatrix rho = g.mixed(n);
    const Trajectory tr = evolve_ode(SwitchedHamiltonian::constant(h), rho, 0.0, 5.0, ctrl, times);
    for (double t : times) {
      std::size_t i = 0;
      while (tr.time(i) < t) ++i;
      worst = std::max(worst, max_abs(tr.state(i) - evolve_closed_form(h, rho, t).matrix()));
    }
  }
  o.below("max |ode - closed form|", worst, 1e-6);
  o.below("runtime s", seconds_since(t0), 10.0);
}

// 2. two-level formula against the closed form
void two_level(Verdict& o) {
  Gen g(1002);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    TwoLevelParams p;
    p.r0 = g.unit_disk();
    for (auto& r : p.r) r = g.unit_disk();
    const DensityMatrix rho = g.mixed(2);
    const double t = g.uniform(0.0, 5.0);
    worst = std::max(worst, max_abs(evolve_two_level(p, rho, t).matrix() - evolve_closed_form(p.matrix(), rho, t).matrix()));
  }
  o.below("max |two-level - closed form|", worst, 1e-10);
}

// 3. qubit regimes gamma = 0 and gamma = 3
void regimes(Verdict& o) {
  IntegratorControl tight;
  tight.rel_tol = 1e-12;
  tight.abs_tol = 1e-14;
  Gen g(1003);
  double period = 0.0, dz = 0.0, dpur = 0.0;
  for (int k = 0; k < 10; ++k) {
    const DensityMatrix rho = from_bloch(g.bloch());
    const Trajectory tr = evolve_ode(SwitchedHamiltonian::constant(fig1_h(0.0)), rho, 0.0, M_PI, tight);
    period = std::max(period, max_abs(tr.final_state() - rho.matrix()));
    const double z0 = to_bloch(rho).z;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      dz = std::max(dz, std::abs(tr.bloch(i).z - z0));
      dpur = std::max(dpur, std::abs(tr.purity(i) - rho.purity()));
    }
  }
  o.below("gamma=0 |rho(pi) - rho(0)|", period, 1e-8);
  o.below("z drift", dz, 1e-9);
  o.below("purity drift", dpur, 1e-9);
  double zmin = 1.0, dist = 0.0;
  const ComplexMatrix north = DensityMatrix::basis_state(2, 0).matrix();
  for (int k = 0; k < 20; ++k) {
    BlochState b = g.bloch();
    while (b.z < -0.999) b = g.bloch();
    const Trajectory tr = evolve_ode(SwitchedHamiltonian::constant(fig1_h(3.0)), from_bloch(b), 0.0, 5.0);
    zmin = std::min(zmin, tr.bloch(tr.size() - 1).z);
    dist = std::max(dist, trace_distance(tr.final_state(), north));
  }
  o.above("gamma=3 min z(5)", zmin, 0.999);
  o.below("distance to |0><0|", dist, 1e-3);
}

// 4. stability spectra at the poles
void spectra(Verdict& o) {
  const FlowSpec spec{FlowVariant::Normalized3d, 3.0};
  const auto near = [](const std::vector<Complex>& got, std::vector<Complex> want) {
    double worst = 0.0;
    for (const Complex& w : want) {
      double best = 1e300;
      for (const Complex& e : got) best = std::min(best, std::abs(e - w));
      worst = std::max(worst, best);
    }
    return worst;
  };
  FlowVector north(3), south(3);
  north << 0, 0, 1;
  south << 0, 0, -1;
  const std::vector<Complex> sink{{-6, 0}, {-3, 2}, {-3, -2}};
  const std::vector<Complex> source{{6, 0}, {3, 2}, {3, -2}};
  o.below("north analytic", near(jacobian_eigenvalues(analytic_jacobian(spec, north)), sink), 1e-9);
  o.below("north finite-difference", near(jacobian_eigenvalues(numerical_jacobian(spec, north)), sink), 1e-9);
  o.below("south analytic", near(jacobian_eigenvalues(analytic_jacobian(spec, south)), source), 1e-9);
  o.below("south finite-difference", near(jacobian_eigenvalues(numerical_jacobian(spec, south)), source), 1e-9);
  const auto pts = fixed_points(spec);
  o.require("sink/source", pts.size() == 2 && pts[0].classification == FixedPointKind::Sink &&
                               pts[1].classification == FixedPointKind::Source);
  bool centers = true;
  for (double z : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    FlowVector p(3);
    p << 0, 0, z;
    centers = centers && classify_point({FlowVariant::Normalized3d, 0.0}, p).classification == FixedPointKind::Center;
  }
  o.require("gamma=0 centers", centers);
}

// 5. collapse with a window on [7, 8]
void collapse(Verdict& o) {
  const auto window = SwitchingProfile::hard_window(7.0, 8.0);
  const double s = 1.0 / std::sqrt(2.0);
  const DensityMatrix plus = PureStateAmplitudes(s, s).density();
  const ScenarioResult r = run_scenario({two_level_pm(+1, 3.0, window), plus, 0.0, 13.0});
  o.at_least("final target population", r.metrics.final_target_population, 0.99);
  o.below("persistence over [t_f, t_f + 5]", r.metrics.persistence_error, 1e-3);

  const double ev[] = {1.0, -1.0};
  const auto zb = z_basis();
  const auto xb = x_basis();
  ComplexMatrix u(2, 2);
  u << s, s, s, -s;
  IntegratorControl ctrl;
  ctrl.rel_tol = 1e-11;
  ctrl.abs_tol = 1e-14;
  const ScenarioResult a = run_scenario({measurement_hamiltonian(zb, ev, 0, 3.0, window), plus, 0.0, 13.0, ctrl});
  const ScenarioResult b = run_scenario({measurement_hamiltonian(xb, ev, 0, 3.0, window),
                                         DensityMatrix(u * plus.matrix() * u.adjoint()), 0.0, 13.0, ctrl});
  double worst = a.trajectory.size() == b.trajectory.size() ? 0.0 : 1.0;
  for (std::size_t i = 0; i < std::min(a.trajectory.size(), b.trajectory.size()); ++i) {
    worst = std::max(worst, max_abs(u * a.trajectory.state(i) * u.adjoint() - b.trajectory.state(i)));
  }
  o.below("sigma_x vs conjugated sigma_z", worst, 1e-8);
}

// 6. four-level degeneracy cases
void degeneracy(Verdict& o) {
  RealVector p(4);
  p << 0.1, 0.2, 0.3, 0.4;
  const DensityMatrix rho0 = DensityMatrix::diagonal(p);
  for (auto [which, name] : {std::pair{DegeneracyCase::A, "a"}, std::pair{DegeneracyCase::B, "b"}}) {
    const DegeneracyReport r = degeneracy_run(which, rho0);
    o.above(std::string("case ") + name + " p(level 1)", r.final_populations(0), 0.999);
  }
  const DegeneracyReport c = degeneracy_run(DegeneracyCase::C, rho0);
  o.below("case c p2", c.final_populations(2), 1e-3);
  o.below("case c p3", c.final_populations(3), 1e-3);
  double worst = 0.0;
  const Trajectory& tr = c.trajectory;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    worst = std::max(worst, std::abs(tr.population(i, 0) / tr.population(i, 1) - 0.5));
  }
  o.below("max |p0/p1 - 0.5|", worst, 1e-6);
}

// 7. case identities
void case_identities(Verdict& o) {
  Gen g(1007);
  double bc1 = 0.0, ba = 0.0, coh = 0.0;
  for (int k = 0; k < 100; ++k) {
    const ComplexVector v = g.state_vector(2);
    const PureStateAmplitudes c(v(0), v(1));
    const double l1 = g.uniform(-3, 3), l2 = g.uniform(-3, 3), gamma = g.uniform(0.05, 3.0), t = g.uniform(0, 4);
    bc1 = std::max(bc1, max_abs(case_formula(CaseFormula::B, l1, l2, gamma, c, t) -
                                case_formula(CaseFormula::C1, l1, l2, gamma, c, t)));
    ba = std::max(ba, max_abs(case_formula(CaseFormula::B, l1, l2, 2.0 * gamma, c, t) -
                              case_formula(CaseFormula::A, l1, l2, gamma, c, t)));
  }
  // The sech law needs |c1| = |c2|; phases are free.
  for (int k = 0; k < 10; ++k) {
    const double s = 1.0 / std::sqrt(2.0);
    const PureStateAmplitudes c(std::polar(s, g.uniform(0, 2 * M_PI)), std::polar(s, g.uniform(0, 2 * M_PI)));
    const double l1 = g.uniform(-3, 3), l2 = g.uniform(-3, 3), gamma = g.uniform(0.1, 3.0);
    for (int i = 0; i < 50; ++i) {
      const double t = 0.05 * i;
      const double got = std::abs(case_formula(CaseFormula::A, l1, l2, gamma, c, t)(0, 1));
      coh = std::max(coh, std::abs(got - std::abs(c.c1() * c.c2()) / std::cosh(2.0 * gamma * t)));
    }
  }
  o.at_most("|B - C1|", bc1, 1e-15);
  o.below("|B(2g) - A(g)|", ba, 1e-12);
  o.below("coherence vs sech law", coh, 1e-10);
}

// 8. incoherent sum and the dephasing model
void lindblad_bridge(Verdict& o) {
  Gen g(1008);
  double trace = 0.0, pops = 0.0, coh = 0.0;
  for (int k = 0; k < 50; ++k) {
    const ComplexVector v = g.state_vector(2);
    const PureStateAmplitudes c(v(0), v(1));
    const double gamma = g.uniform(0.1, 3.0), t = g.uniform(0.0, 6.0);
    const IncoherentSumResult s = incoherent_sum(1.0, -1.0, gamma, c, t);
    trace = std::max(trace, std::abs(s.raw_trace - (1.0 + std::exp(-2.0 * gamma * t))));
    pops = std::max({pops, std::abs(s.normalized(0, 0).real() - c.p0()), std::abs(s.normalized(1, 1).real() - c.p1())});
    coh = std::max(coh, std::abs(std::abs(s.normalized(0, 1)) - std::abs(c.c1() * c.c2()) / std::cosh(gamma * t)));
  }
  o.below("raw trace vs 1 + e^{-2gt}", trace, 1e-8);
  o.below("populations", pops, 1e-12);
  o.below("coherence vs sech", coh, 1e-8);

  const io::ScenarioConfig cfg = io::load_config(std::string(NHM_CONFIG_DIR) + "/lindblad.yaml");
  const auto& lp = std::get<io::LindbladParams>(cfg.params);
  const PureStateAmplitudes c(lp.amplitudes.amplitudes.at(0), lp.amplitudes.amplitudes.at(1));
  const IncoherentSumResult at6 = incoherent_sum(lp.lambda1, lp.lambda2, 1.0, c, 6.0);
  o.below("distance to diagonal at gamma t = 6", trace_distance(at6.normalized.matrix(), diag2(c.p0(), c.p1())), 1e-4);

  const LindbladModel m(diag2(1.0, -1.0), {{pauli_z(), 0.4}, {g.disk_matrix(2), 0.7}});
  const Trajectory tr = lindblad_evolve(m, c.density(), 0.0, 10.0);
  double drift = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) drift = std::max(drift, std::abs(tr.trace(i) - 1.0));
  o.below("Lindblad trace drift", drift, 1e-9);
}

// 9. hidden-variable ensemble
void ensemble(Verdict& o) {
  const io::ScenarioConfig cfg = io::load_config(std::string(NHM_CONFIG_DIR) + "/ensemble.yaml");
  EnsembleSpec spec = io::ensemble_spec(cfg);
  spec.n_runs = 10000;
  spec.log_runs = true;
  const double fast = spec.gamma * 2.0 * (spec.window / spec.partitions.max) * (1.0 - spec.amplitudes.p0());
  o.require("fast regime (gamma 2L (1 - p0) = " + std::to_string(fast) + " > 10)", fast > 10.0);
  const auto t0 = std::chrono::steady_clock::now();
  const EnsembleResult a = run_ensemble(spec);
  const double secs = seconds_since(t0);
  o.below("|freq0 - 0.7|", std::abs(a.freq0 - spec.amplitudes.p0()), 0.02);
  o.below("indeterminate", a.indeterminate, 0.01);
  o.below("runtime s", secs, 60.0);
  const EnsembleResult b = run_ensemble(spec);
  std::ostringstream sa, sb;
  io::write_ensemble_runs_csv(sa, a.runs);
  io::write_ensemble_runs_csv(sb, b.runs);
  o.require("byte-identical rerun", sa.str() == sb.str() && io::to_json(a).dump() == io::to_json(b).dump());
}

// 10. property suites
void properties(Verdict& o) {
  long states = 0;
  double trace = 0.0, herm = 0.0, neg = 0.0;
  for (const auto& f : nhm::testing::golden_config_files(NHM_CONFIG_DIR)) {
    for (const auto& run : nhm::testing::golden_trajectories(io::load_config(f.string()))) {
      const Trajectory& tr = run.trajectory;
      for (std::size_t i = 0; i < tr.size(); ++i) {
        const ComplexMatrix& m = tr.state(i);
        if (tr.normalized()) trace = std::max(trace, std::abs(m.trace().real() - 1.0));
        herm = std::max(herm, hermiticity_defect(m));
        neg = std::max(neg, -min_eigenvalue(0.5 * (m + m.adjoint())));
        ++states;
      }
    }
  }
  o.require(std::to_string(states) + " golden states scanned", states > 1000);
  o.below("trace error", trace, 1e-9);
  o.below("hermiticity defect", herm, 1e-12);
  o.below("negative eigenvalue", neg, 1e-9);

  Gen g(1010);
  double purity = 0.0;
  for (int k = 0; k < 25; ++k) {
    const int n = g.integer(2, 6);
    const Trajectory tr =
        evolve_ode(SwitchedHamiltonian::constant(2.0 * g.disk_matrix(n)), g.pure(n), 0.0, g.uniform(0.5, 4.0));
    for (std::size_t i = 0; i < tr.size(); ++i) purity = std::max(purity, std::abs(tr.purity(i) - 1.0));
  }
  o.below("pure-start purity drift", purity, 1e-8);

  bool monotone = true, floor = true;
  const double gammas[] = {0.5, 1.0, 2.0, 3.0, 5.0};
  const double widths[] = {0.25, 0.5, 1.0, 2.0};
  for (std::size_t a = 0; a < std::size(gammas); ++a) {
    for (std::size_t b = 0; b < std::size(widths); ++b) {
      const double k = collapse_degree(gammas[a], 1.0, 1.0 + widths[b]);
      if (a > 0) monotone = monotone && k > collapse_degree(gammas[a - 1], 1.0, 1.0 + widths[b]);
      if (b > 0) monotone = monotone && k > collapse_degree(gammas[a], 1.0, 1.0 + widths[b - 1]);
      const ScenarioResult r =
          run_scenario({two_level_pm(+1, gammas[a], SwitchingProfile::hard_window(1.0, 1.0 + widths[b])),
                        from_bloch({1.0, 0.0, 0.0}), 0.0, 3.0 + widths[b]});
      floor = floor && r.metrics.final_target_population >= k;
    }
  }
  o.require("kappa monotone", monotone);
  o.require("collapse >= kappa", floor);

  bool invariant = true;
  for (int k = 0; k < 200; ++k) {
    const int n = g.integer(2, 8);
    const ComplexMatrix h = 2.0 * g.disk_matrix(n);
    const AttractorPrediction p = attractor_prediction(h);
    const double c = g.uniform(0.1, 10.0);
    const Complex shift(g.uniform(-5.0, 5.0), g.uniform(-3.0, 3.0));
    for (const ComplexMatrix& m : {ComplexMatrix(c * h), ComplexMatrix(h + shift * identity(n))}) {
      const AttractorPrediction q = attractor_prediction(m);
      invariant = invariant && q.kind == p.kind && q.indices == p.indices;
    }
  }
  o.require("attractor scale/shift invariance", invariant);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
      {"cross-engine equivalence", cross_engine},
      {"two-level formula", two_level},
      {"qubit regimes", regimes},
      {"stability spectra", spectra},
      {"collapse scenario", collapse},
      {"degeneracy", degeneracy},
      {"case identities", case_identities},
      {"Lindblad bridge", lindblad_bridge},
      {"stochastic ensemble", ensemble},
      {"property suites", properties},
  };
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only != 0 && static_cast<int>(k) + 1 != only) continue;
    Verdict o;
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << (o.detail.tellp() > 0 ? "; " : "") << "exception: " << e.what();
    }
    std::cout << "criterion " << k + 1 << " (" << criteria[k].first << "): " << (o.pass ? "PASS" : "FAIL") << ": "
              << o.detail.str() << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
