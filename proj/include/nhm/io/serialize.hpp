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

// serialize.hpp: CSV and JSON writers for trajectories and reports.

#pragma once

#include <json.hpp>

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "nhm/bloch_dynamics.hpp"
#include "nhm/evolution.hpp"
#include "nhm/lindblad.hpp"
#include "nhm/measurement.hpp"
#include "nhm/stochastic.hpp"

namespace nhm::io {

using Json = nlohmann::ordered_json;

// %.17g, so every double survives a text round trip.
std::string format_double(double v);

// t, re_rho_ij / im_rho_ij (row-major upper triangle), x y z [w] for qubits,
// p0..p{N-1}, purity, ov_<name> per reference.
std::vector<std::string> trajectory_columns(const Trajectory& traj);
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

// x, y, z[, w], then dx, dy, dz[, dw].
void write_phase_portrait_csv(std::ostream& os, std::span<const FieldSample> samples, int arity);
void write_ensemble_runs_csv(std::ostream& os, std::span<const RunRecord> runs);
void write_dephasing_csv(std::ostream& os, const DephasingComparison& cmp);

// One row per grid time; re/im of every entry of each case matrix.
struct CaseSeries {
  CaseFormula which;
  std::vector<ComplexMatrix> values;
};
void write_cases_csv(std::ostream& os, std::span<const double> times, std::span<const CaseSeries> series);

Json to_json(Complex z);
Json to_json(const ComplexMatrix& m);
Json to_json(const BlochState& b);
Json to_json(const AttractorPrediction& a);
Json to_json(const CollapseMetrics& m);
Json to_json(const TrajectoryDiagnostics& d);
Json to_json(const DegeneracyReport& r);
Json to_json(const FixedPointReport& r);
Json to_json(const EnsembleResult& r);

// Writes `content` atomically enough for scripts: whole-file replace.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace nhm::io
