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

// config.hpp: scenario configuration files (YAML), parsing with located
// diagnostics, and a canonical re-serialization.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nhm/bloch_dynamics.hpp"
#include "nhm/errors.hpp"
#include "nhm/evolution.hpp"
#include "nhm/hamiltonian.hpp"
#include "nhm/stochastic.hpp"

namespace nhm::io {

struct ConfigIssue {
  int line = 0;  // 1-based; 0 when unknown
  std::string key;
  std::string reason;
};

class ConfigError : public ValidationError {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

enum class ScenarioKind { Evolve, Collapse, Degeneracy, Cases, Lindblad, Ensemble, FixedPoints };

std::string to_string(ScenarioKind k);

struct MatrixSpec {
  int dim = 0;
  std::vector<Complex> entries;  // row-major

  ComplexMatrix build() const;
  static MatrixSpec from(const ComplexMatrix& m);
  bool operator==(const MatrixSpec&) const = default;
};

struct StateSpec {
  enum class Form { Bloch, Amplitudes, Vector, Diagonal, Basis, Mixed, Density, Initial };
  Form form = Form::Bloch;
  std::vector<double> values;       // bloch (3), diagonal (N)
  std::vector<Complex> amplitudes;  // amplitudes (2) or vector (N)
  int dim = 2;                      // basis, mixed
  int index = 0;                    // basis
  MatrixSpec density;               // density

  // `initial` resolves Form::Initial.
  DensityMatrix build(const DensityMatrix* initial = nullptr) const;
  bool operator==(const StateSpec&) const = default;
};

struct WindowSpec {
  SwitchKind kind = SwitchKind::AlwaysOn;
  double t_i = 0.0;
  double t_f = 0.0;
  double sharpness = 0.0;  // 0: the Hamiltonian's gamma

  bool operator==(const WindowSpec&) const = default;
};

struct HamiltonianSpec {
  enum class Family { NhQubit, TwoLevelPm, Measurement, Matrix, Constant };
  Family family = Family::NhQubit;
  double gamma = 0.0;
  int sign = 1;
  std::string basis = "z";  // measurement: z or x
  std::vector<double> eigenvalues{1.0, -1.0};
  int target = 0;
  MatrixSpec base;  // matrix: Hermitian base; constant: the full H
  MatrixSpec gain;
  bool base_in_window = true;

  bool operator==(const HamiltonianSpec&) const = default;
};

SwitchedHamiltonian build_hamiltonian(const HamiltonianSpec& h, const WindowSpec& w);

struct ReferenceSpec {
  std::string name;
  StateSpec state;
  bool operator==(const ReferenceSpec&) const = default;
};

struct IntegratorSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_step = 0.0;
  double sample_every = 0.0;

  IntegratorControl control() const { return {rel_tol, abs_tol, max_step, sample_every}; }
  bool operator==(const IntegratorSpec&) const = default;
};

struct EvolveParams {
  enum class Engine { Ode, ClosedForm, TwoLevel, Unnormalized };
  HamiltonianSpec hamiltonian;
  WindowSpec window;
  std::vector<StateSpec> initial_states;
  double t_start = 0.0;
  double t_end = 5.0;
  Engine engine = Engine::Ode;
  std::vector<ReferenceSpec> references;
  bool operator==(const EvolveParams&) const = default;
};

struct CollapseParams {
  HamiltonianSpec hamiltonian;
  WindowSpec window;
  StateSpec initial_state;
  double t_start = 0.0;
  double t_end = 0.0;  // 0: t_f + 5
  std::vector<ReferenceSpec> references;
  bool operator==(const CollapseParams&) const = default;
};

struct DegeneracyParams {
  DegeneracyCase which = DegeneracyCase::A;
  double gamma = 3.0;
  double t_i = 6.0;
  double t_f = 8.0;
  double t_start = 0.0;
  double t_end = 10.0;
  StateSpec initial_state;
  bool operator==(const DegeneracyParams&) const = default;
};

struct GridSpec {
  double start = 0.0;
  double end = 1.0;
  double step = 0.01;
  std::vector<double> points() const;
  bool operator==(const GridSpec&) const = default;
};

struct CasesParams {
  std::vector<CaseFormula> cases{CaseFormula::A, CaseFormula::B, CaseFormula::C1, CaseFormula::C2};
  double lambda1 = 1.0;
  double lambda2 = -1.0;
  double gamma = 1.0;
  StateSpec amplitudes;
  GridSpec grid{0.0, 2.0, 0.02};
  bool operator==(const CasesParams&) const = default;
};

struct LindbladParams {
  double lambda1 = 1.0;
  double lambda2 = -1.0;
  double gamma = 1.0;
  StateSpec amplitudes;
  GridSpec grid{0.0, 6.0, 0.05};
  bool operator==(const LindbladParams&) const = default;
};

struct EnsembleParams {
  StateSpec amplitudes;
  double gamma = 120.0;
  double t_i = 1.0;
  double window = 10.0;
  long n_runs = 1000;
  PartitionLaw::Kind partition_law = PartitionLaw::Kind::UniformEven;
  int partitions_fixed = 40;
  int partitions_min = 20;
  int partitions_max = 60;
  TfJitter tf_jitter = TfJitter::OnePeriod;
  WaveMode g_mode = WaveMode::ExactSquare;
  int fourier_terms = HiddenVariableWave::kDefaultFourierTerms;
  double switching_sharpness = 0.0;
  double threshold = 0.99;
  bool log_runs = true;
  unsigned threads = 0;
  bool operator==(const EnsembleParams&) const = default;
};

struct FixedPointsParams {
  FlowVariant variant = FlowVariant::Normalized3d;
  double gamma = 3.0;
  int portrait_points = 9;
  bool operator==(const FixedPointsParams&) const = default;
};

using ScenarioParams = std::variant<EvolveParams, CollapseParams, DegeneracyParams, CasesParams,
                                    LindbladParams, EnsembleParams, FixedPointsParams>;

struct OutputSpec {
  std::string stem;  // file name prefix; empty: the scenario name or kind
  bool operator==(const OutputSpec&) const = default;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Evolve;
  std::string name;
  std::optional<std::uint64_t> seed;
  IntegratorSpec integrator;
  OutputSpec output;
  ScenarioParams params;

  bool operator==(const ScenarioConfig&) const = default;
};

// ConfigError listing every problem found (line, key, reason).
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);
// Same text with the top-level seed replaced (or added).
std::string with_seed(std::string_view text, std::uint64_t seed);

// Canonical YAML with 17 significant digits; parse_config inverts it.
std::string serialize_config(const ScenarioConfig& c);

EnsembleSpec ensemble_spec(const ScenarioConfig& c);

}  // namespace nhm::io
