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

#include "nhm/io/runner.hpp"

#include <cmath>
#include <sstream>

#include "nhm/errors.hpp"
#include "nhm/io/serialize.hpp"

namespace nhm::io {

namespace {

struct Context {
  const ScenarioConfig& config;
  std::filesystem::path dir;
  std::string stem;
  std::ostream* log;
  RunReport report;

  std::filesystem::path file(const std::string& suffix) const { return dir / (stem + suffix); }

  void emit(const std::string& suffix, const std::string& content) {
    const auto path = file(suffix);
    write_text_file(path, content);
    report.files.push_back(path);
    if (log) *log << "wrote " << path.string() << '\n';
  }

  void emit_json(const std::string& suffix, Json j) {
    Json doc;
    doc["kind"] = to_string(config.kind);
    doc["name"] = config.name;
    if (config.seed) doc["seed"] = *config.seed;
    for (auto& [k, v] : j.items()) doc[k] = v;
    emit(suffix, doc.dump(2) + "\n");
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string list(const RealVector& v) {
  std::string s = "[";
  for (Eigen::Index k = 0; k < v.size(); ++k) s += (k ? ", " : "") + fmt(v(k));
  return s + "]";
}

std::string attractor_text(const AttractorPrediction& a) {
  switch (a.kind) {
    case AttractorKind::Unique: return "eigenstate " + std::to_string(a.index());
    case AttractorKind::Degenerate: return "degenerate";
    case AttractorKind::None: return "none";
  }
  return "none";
}

void add_references(Trajectory& traj, const std::vector<ReferenceSpec>& refs, const DensityMatrix& initial) {
  for (const auto& r : refs) traj.add_reference(r.name, r.state.build(&initial));
}

std::string csv_of(const Trajectory& traj) {
  std::ostringstream os;
  write_trajectory_csv(os, traj);
  return os.str();
}

Trajectory closed_form_trajectory(const ComplexMatrix& h, const DensityMatrix& rho0, double t0, double t1,
                                  const IntegratorControl& ctrl, bool two_level) {
  const double dt = ctrl.sample_every > 0.0 ? ctrl.sample_every : (t1 - t0) / 400.0;
  Trajectory traj(true);
  const auto params = two_level ? TwoLevelParams::from_matrix(h) : TwoLevelParams{};
  for (double t : sample_grid(t0, t1, dt)) {
    const double s = t - t0;
    traj.push(t, (two_level ? evolve_two_level(params, rho0, s) : evolve_closed_form(h, rho0, s)).matrix());
  }
  return traj;
}

void run_evolve(Context& cx, const EvolveParams& p) {
  const SwitchedHamiltonian h = build_hamiltonian(p.hamiltonian, p.window);
  const IntegratorControl ctrl = cx.config.integrator.control();
  Json states = Json::array();
  std::string first;
  for (std::size_t k = 0; k < p.initial_states.size(); ++k) {
    const DensityMatrix rho0 = p.initial_states[k].build();
    Trajectory traj;
    switch (p.engine) {
      case EvolveParams::Engine::Ode:
        traj = evolve_ode(h, rho0, p.t_start, p.t_end, ctrl);
        break;
      case EvolveParams::Engine::Unnormalized:
        traj = evolve_unnormalized(h, rho0, p.t_start, p.t_end, ctrl);
        break;
      case EvolveParams::Engine::ClosedForm:
      case EvolveParams::Engine::TwoLevel:
        traj = closed_form_trajectory(h(p.t_start), rho0, p.t_start, p.t_end, ctrl,
                                      p.engine == EvolveParams::Engine::TwoLevel);
        break;
    }
    add_references(traj, p.references, rho0);
    cx.emit("_" + std::to_string(k) + ".csv", csv_of(traj));
    Json s;
    const ComplexMatrix& fin = traj.final_state();
    RealVector pops(fin.rows());
    for (Eigen::Index i = 0; i < fin.rows(); ++i) pops(i) = fin(i, i).real();
    s["final_populations"] = std::vector<double>(pops.begin(), pops.end());
    s["final_trace"] = fin.trace().real();
    s["final_purity"] = (fin * fin).trace().real();
    if (fin.rows() == 2) s["final_bloch"] = to_json(bloch_components(fin));
    s["diagnostics"] = to_json(traj.diagnostics);
    states.push_back(s);
    if (k == 0) first = list(pops);
  }
  const auto attractor = attractor_prediction(h.window_hamiltonian());
  Json j;
  j["attractor"] = to_json(attractor);
  j["states"] = states;
  cx.emit_json(".json", j);
  cx.report.summary = "evolve: " + std::to_string(p.initial_states.size()) + " trajectories; final populations " +
                      first + " (state 0); attractor " + attractor_text(attractor);
}

void run_collapse(Context& cx, const CollapseParams& p) {
  MeasurementScenario s{build_hamiltonian(p.hamiltonian, p.window), p.initial_state.build(), p.t_start, p.t_end,
                        cx.config.integrator.control()};
  ScenarioResult r = run_scenario(s);
  add_references(r.trajectory, p.references, s.initial_state);
  for (const auto& w : r.metrics.warnings) {
    if (cx.log) *cx.log << "warning: " << w << '\n';
  }
  cx.emit(".csv", csv_of(r.trajectory));
  Json j;
  j["metrics"] = to_json(r.metrics);
  j["diagnostics"] = to_json(r.trajectory.diagnostics);
  cx.emit_json(".json", j);
  cx.report.summary = "collapse: final populations " + list(r.trajectory.populations(r.trajectory.size() - 1)) +
                      "; kappa " + fmt(r.metrics.kappa) + "; attractor " + attractor_text(r.metrics.attractor) +
                      "; final target population " + fmt(r.metrics.final_target_population);
}

void run_degeneracy(Context& cx, const DegeneracyParams& p) {
  DegeneracyOptions o;
  o.gamma = p.gamma;
  o.t_i = p.t_i;
  o.t_f = p.t_f;
  o.t_start = p.t_start;
  o.t_end = p.t_end;
  o.control = cx.config.integrator.control();
  const DegeneracyReport r = degeneracy_run(p.which, p.initial_state.build(), o);
  cx.emit(".csv", csv_of(r.trajectory));
  Json j;
  j["report"] = to_json(r);
  cx.emit_json(".json", j);
  cx.report.summary = "degeneracy: final populations " + list(r.final_populations) + "; kappa " +
                      fmt(collapse_degree(p.gamma, p.t_i, p.t_f)) + "; attractor " + attractor_text(r.attractor);
}

void run_cases(Context& cx, const CasesParams& p) {
  const PureStateAmplitudes c(p.amplitudes.amplitudes.at(0), p.amplitudes.amplitudes.at(1));
  const auto times = p.grid.points();
  std::vector<CaseSeries> series;
  for (auto which : p.cases) {
    CaseSeries s{which, {}};
    for (double t : times) s.values.push_back(case_formula(which, p.lambda1, p.lambda2, p.gamma, c, t));
    series.push_back(std::move(s));
  }
  std::ostringstream os;
  write_cases_csv(os, times, series);
  cx.emit(".csv", os.str());
  Json j;
  j["lambda1"] = p.lambda1;
  j["lambda2"] = p.lambda2;
  j["gamma"] = p.gamma;
  Json fin = Json::object();
  const char* names[] = {"A", "B", "C1", "C2"};
  std::string text;
  for (const auto& s : series) {
    fin[names[static_cast<int>(s.which)]] = to_json(s.values.back());
    text += std::string(text.empty() ? "" : ", ") + names[static_cast<int>(s.which)] + " p0 " +
            fmt(s.values.back()(0, 0).real());
  }
  j["final"] = fin;
  cx.emit_json(".json", j);
  cx.report.summary = "cases: t = " + fmt(times.back()) + ": " + text;
}

void run_lindblad(Context& cx, const LindbladParams& p) {
  const PureStateAmplitudes c(p.amplitudes.amplitudes.at(0), p.amplitudes.amplitudes.at(1));
  const auto times = p.grid.points();
  const DephasingComparison cmp = compare_to_dephasing(p.lambda1, p.lambda2, p.gamma, c, times,
                                                       cx.config.integrator.control());
  std::ostringstream os;
  write_dephasing_csv(os, cmp);
  cx.emit(".csv", os.str());
  const DephasingRow& last = cmp.rows.back();
  Json j;
  j["gamma_eff"] = cmp.gamma_eff;
  j["final"] = {{"t", last.t},
                {"raw_trace", last.raw_trace},
                {"populations", {last.population0, last.population1}},
                {"coherence", last.coherence},
                {"distance_to_lindblad", last.distance_to_lindblad},
                {"distance_to_diagonal", last.distance_to_diagonal}};
  cx.emit_json(".json", j);
  cx.report.summary = "lindblad: final populations [" + fmt(last.population0) + ", " + fmt(last.population1) +
                      "]; coherence " + fmt(last.coherence) + "; fitted dephasing rate " + fmt(cmp.gamma_eff);
}

void run_ensemble_scenario(Context& cx) {
  const EnsembleSpec spec = ensemble_spec(cx.config);
  const EnsembleResult r = run_ensemble(spec);
  if (spec.log_runs) {
    std::ostringstream os;
    write_ensemble_runs_csv(os, r.runs);
    cx.emit("_runs.csv", os.str());
  }
  Json j;
  j["p0"] = spec.amplitudes.p0();
  j["result"] = to_json(r);
  j["born_deviation"] = born_deviation(r, spec.amplitudes);
  cx.emit_json(".json", j);
  cx.report.summary = "ensemble: " + std::to_string(r.n_runs) + " runs; frequencies [" + fmt(r.freq0) + ", " +
                      fmt(r.freq1) + "]; indeterminate " + fmt(r.indeterminate) + "; Born p0 " +
                      fmt(spec.amplitudes.p0());
}

void run_fixed_points(Context& cx, const FixedPointsParams& p) {
  const FlowSpec spec{p.variant, p.gamma};
  const auto points = fixed_points(spec);
  const auto field = phase_portrait(spec, p.portrait_points);
  std::ostringstream os;
  write_phase_portrait_csv(os, field, spec.arity());
  cx.emit("_portrait.csv", os.str());
  Json j;
  j["variant"] = p.variant == FlowVariant::Normalized3d ? "normalized-3d" : "unnormalized-4d";
  j["gamma"] = p.gamma;
  j["fixed_points"] = Json::array();
  std::string text;
  for (const auto& fp : points) {
    j["fixed_points"].push_back(to_json(fp));
    std::string loc = "(";
    for (Eigen::Index k = 0; k < fp.location.size(); ++k) loc += (k ? "," : "") + fmt(fp.location(k));
    text += std::string(text.empty() ? "" : ", ") + to_string(fp.classification) + " " + loc + ")";
  }
  cx.emit_json(".json", j);
  cx.report.summary = "fixed-points: " + text;
}

}  // namespace

RunReport run(const ScenarioConfig& config, const std::filesystem::path& out_dir, std::ostream* log) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ValidationError("cannot create output directory '" + out_dir.string() + "': " + ec.message());
  std::string stem = config.output.stem;
  if (stem.empty()) stem = config.name;
  if (stem.empty()) stem = to_string(config.kind);
  Context cx{config, out_dir, stem, log, {}};
  std::visit(
        [&](const auto& p) {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, EvolveParams>) run_evolve(cx, p);
          else if constexpr (std::is_same_v<P, CollapseParams>) run_collapse(cx, p);
          else if constexpr (std::is_same_v<P, DegeneracyParams>) run_degeneracy(cx, p);
          else if constexpr (std::is_same_v<P, CasesParams>) run_cases(cx, p);
          else if constexpr (std::is_same_v<P, LindbladParams>) run_lindblad(cx, p);
          else if constexpr (std::is_same_v<P, EnsembleParams>) run_ensemble_scenario(cx);
          else run_fixed_points(cx, p);
        },
        config.params);
  cx.emit(".config.yaml", serialize_config(config));
  return cx.report;
}

}  // namespace nhm::io
