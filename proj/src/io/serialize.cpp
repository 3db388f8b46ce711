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

#include "nhm/io/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "nhm/errors.hpp"

namespace nhm::io {

namespace {

void write_row(std::ostream& os, std::span<const double> row) {
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (!std::isfinite(row[k])) throw ValidationError("csv: non-finite value in column " + std::to_string(k));
    if (k) os << ',';
    os << format_double(row[k]);
  }
  os << '\n';
}

void write_header(std::ostream& os, const std::vector<std::string>& cols) {
  for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
  os << '\n';
}

const char* kind_name(AttractorKind k) {
  switch (k) {
    case AttractorKind::Unique: return "unique";
    case AttractorKind::Degenerate: return "degenerate";
    case AttractorKind::None: return "none";
  }
  return "none";
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> trajectory_columns(const Trajectory& traj) {
  const int n = traj.dim();
  std::vector<std::string> cols{"t"};
  for (int r = 0; r < n; ++r) {
    for (int c = r; c < n; ++c) {
      const auto ij = std::to_string(r) + std::to_string(c);
      cols.push_back("re_rho_" + ij);
      cols.push_back("im_rho_" + ij);
    }
  }
  if (n == 2) {
    for (const char* a : {"x", "y", "z"}) cols.emplace_back(a);
    if (!traj.normalized()) cols.emplace_back("w");
  }
  for (int k = 0; k < n; ++k) cols.push_back("p" + std::to_string(k));
  cols.emplace_back("purity");
  for (const auto& [name, rho] : traj.references()) cols.push_back("ov_" + name);
  return cols;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  if (traj.empty()) throw ValidationError("csv: empty trajectory");
  write_header(os, trajectory_columns(traj));
  const int n = traj.dim();
  std::vector<double> row;
  double last = -INFINITY;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.time(i);
    if (!(t > last)) throw ValidationError("csv: sample times not strictly increasing");
    last = t;
    const ComplexMatrix& m = traj.state(i);
    row.clear();
    row.push_back(t);
    for (int r = 0; r < n; ++r) {
      for (int c = r; c < n; ++c) {
        row.push_back(m(r, c).real());
        row.push_back(m(r, c).imag());
      }
    }
    if (n == 2) {
      const BlochState b = bloch_components(m);
      row.insert(row.end(), {b.x, b.y, b.z});
      if (!traj.normalized()) row.push_back(m.trace().real());
    }
    for (int k = 0; k < n; ++k) row.push_back(m(k, k).real());
    row.push_back((m * m).trace().real());
    for (const auto& [name, rho] : traj.references()) row.push_back((m * rho.matrix()).trace().real());
    write_row(os, row);
  }
}

void write_phase_portrait_csv(std::ostream& os, std::span<const FieldSample> samples, int arity) {
  std::vector<std::string> cols{"x", "y", "z", "dx", "dy", "dz"};
  if (arity == 4) cols = {"x", "y", "z", "w", "dx", "dy", "dz", "dw"};
  write_header(os, cols);
  std::vector<double> row;
  for (const auto& s : samples) {
    row.clear();
    for (int k = 0; k < arity; ++k) row.push_back(s.point(k));
    for (int k = 0; k < arity; ++k) row.push_back(s.velocity(k));
    write_row(os, row);
  }
}

void write_ensemble_runs_csv(std::ostream& os, std::span<const RunRecord> runs) {
  os << "index,partitions,t_f,outcome,p0,p1\n";
  for (const auto& r : runs) {
    os << r.index << ',' << r.partitions << ',' << format_double(r.t_f) << ',' << to_string(r.outcome) << ','
       << format_double(r.population0) << ',' << format_double(r.population1) << '\n';
  }
}

void write_dephasing_csv(std::ostream& os, const DephasingComparison& cmp) {
  write_header(os, {"t", "raw_trace", "p0", "p1", "coherence", "lindblad_coherence", "distance_to_lindblad",
                    "distance_to_diagonal"});
  for (const auto& r : cmp.rows) {
    const double row[] = {r.t, r.raw_trace, r.population0, r.population1, r.coherence, r.lindblad_coherence,
                          r.distance_to_lindblad, r.distance_to_diagonal};
    write_row(os, row);
  }
}

void write_cases_csv(std::ostream& os, std::span<const double> times, std::span<const CaseSeries> series) {
  const char* names[] = {"A", "B", "C1", "C2"};
  std::vector<std::string> cols{"t"};
  for (const auto& s : series) {
    if (s.values.size() != times.size()) throw DimensionError("cases csv: series length mismatch");
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        const std::string tag = std::string(names[static_cast<int>(s.which)]) + "_" + std::to_string(r) +
                                std::to_string(c);
        cols.push_back("re_" + tag);
        cols.push_back("im_" + tag);
      }
    }
  }
  write_header(os, cols);
  std::vector<double> row;
  for (std::size_t i = 0; i < times.size(); ++i) {
    row.assign(1, times[i]);
    for (const auto& s : series) {
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
          row.push_back(s.values[i](r, c).real());
          row.push_back(s.values[i](r, c).imag());
        }
      }
    }
    write_row(os, row);
  }
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const BlochState& b) { return Json::array({b.x, b.y, b.z}); }

Json to_json(const AttractorPrediction& a) {
  Json j;
  j["kind"] = kind_name(a.kind);
  j["indices"] = a.indices;
  j["eigenvalues"] = Json::array();
  for (const auto& l : a.eigenvalues) j["eigenvalues"].push_back(to_json(l));
  j["eigenvectors"] = Json::array();
  for (const auto& v : a.eigenvectors) {
    Json col = Json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) col.push_back(to_json(v(k)));
    j["eigenvectors"].push_back(col);
  }
  return j;
}

Json to_json(const CollapseMetrics& m) {
  Json j;
  j["kappa"] = m.kappa;
  j["rate"] = m.rate;
  j["target_index"] = m.target_index;
  j["target_population_at_tf"] = m.target_population_at_tf;
  j["final_target_population"] = m.final_target_population;
  j["persistence_error"] = m.persistence_error;
  j["attractor"] = to_json(m.attractor);
  j["warnings"] = m.warnings;
  return j;
}

Json to_json(const TrajectoryDiagnostics& d) {
  Json j;
  j["accepted_steps"] = d.accepted_steps;
  j["rejected_steps"] = d.rejected_steps;
  j["rhs_evaluations"] = d.rhs_evaluations;
  j["max_trace_drift"] = d.max_trace_drift;
  j["max_clipped"] = d.max_clipped;
  return j;
}

Json to_json(const DegeneracyReport& r) {
  const char* names[] = {"a", "b", "c"};
  Json j;
  j["case"] = names[static_cast<int>(r.which)];
  j["gamma"] = r.gamma;
  j["t_i"] = r.t_i;
  j["t_f"] = r.t_f;
  j["attractor"] = to_json(r.attractor);
  j["final_populations"] = std::vector<double>(r.final_populations.begin(), r.final_populations.end());
  j["max_ratio_deviation"] = finite_or_null(r.max_ratio_deviation);
  j["final_leak"] = r.final_leak;
  j["diagnostics"] = to_json(r.trajectory.diagnostics);
  return j;
}

Json to_json(const FixedPointReport& r) {
  Json j;
  j["location"] = std::vector<double>(r.location.begin(), r.location.end());
  j["classification"] = to_string(r.classification);
  j["jacobian_eigenvalues"] = Json::array();
  for (const auto& l : r.jacobian_eigenvalues) j["jacobian_eigenvalues"].push_back(to_json(l));
  if (r.line_direction) {
    j["line_direction"] = std::vector<double>(r.line_direction->begin(), r.line_direction->end());
  }
  if (r.member_classification) j["member_classification"] = to_string(*r.member_classification);
  return j;
}

Json to_json(const EnsembleResult& r) {
  Json j;
  j["n_runs"] = r.n_runs;
  j["count0"] = r.count0;
  j["count1"] = r.count1;
  j["count_indeterminate"] = r.count_indeterminate;
  j["freq0"] = r.freq0;
  j["freq1"] = r.freq1;
  j["indeterminate"] = r.indeterminate;
  j["std_error"] = r.std_error;
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw ValidationError("write failed for '" + path.string() + "'");
}

}  // namespace nhm::io
