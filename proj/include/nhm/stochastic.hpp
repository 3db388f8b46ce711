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

// stochastic.hpp: single runs under the hidden-variable modulated Hamiltonian
// and seeded Monte Carlo ensembles over the partition count and end time.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nhm/evolution.hpp"
#include "nhm/hamiltonian.hpp"

namespace nhm {

enum class Outcome { Zero, One, Indeterminate };

std::string to_string(Outcome o);

struct SingleRunOptions {
  // End of the window the wave is built on; NaN uses the run's own t_f.
  double wave_t_f = std::numeric_limits<double>::quiet_NaN();
  double switching_sharpness = 0.0;  // 0: same as gamma
  int fourier_terms = HiddenVariableWave::kDefaultFourierTerms;
  double threshold = 0.99;
  bool keep_trajectory = false;
  IntegratorControl control{};
};

struct SingleRunResult {
  Outcome outcome = Outcome::Indeterminate;
  double population0 = 0.0;
  double population1 = 0.0;
  std::optional<Trajectory> trajectory;
};

// Integrates sigma_z + i (g/2) f(t)(I + g(t) sigma_z) over
// [t_i - 10/gamma, t_f + 10/gamma] and labels the final state.
SingleRunResult single_run(const PureStateAmplitudes& amplitudes, double gamma, double t_i, double t_f,
                           int partitions, WaveMode g_mode, const DensityMatrix& rho0,
                           const SingleRunOptions& opts = {});

struct PartitionLaw {
  enum class Kind { Fixed, UniformEven };
  Kind kind = Kind::UniformEven;
  int fixed = 40;
  int min = 20;
  int max = 60;
};

enum class TfJitter { None, OnePeriod };

struct EnsembleSpec {
  PureStateAmplitudes amplitudes = PureStateAmplitudes::from_probability(0.5);
  double gamma = 120.0;
  double t_i = 1.0;
  double window = 10.0;  // nominal t_f - t_i
  long n_runs = 1000;
  PartitionLaw partitions{};
  TfJitter tf_jitter = TfJitter::OnePeriod;
  std::uint64_t seed = 0;
  WaveMode g_mode = WaveMode::ExactSquare;
  int fourier_terms = HiddenVariableWave::kDefaultFourierTerms;
  double switching_sharpness = 0.0;
  double threshold = 0.99;
  bool log_runs = false;
  unsigned threads = 0;  // 0: hardware concurrency
  IntegratorControl control{};
};

void validate(const EnsembleSpec& spec);

struct RunRecord {
  long index = 0;
  int partitions = 0;
  double t_f = 0.0;
  Outcome outcome = Outcome::Indeterminate;
  double population0 = 0.0;
  double population1 = 0.0;
};

struct EnsembleResult {
  long n_runs = 0;
  long count0 = 0;
  long count1 = 0;
  long count_indeterminate = 0;
  double freq0 = 0.0;
  double freq1 = 0.0;
  double indeterminate = 0.0;
  double std_error = 0.0;  // sqrt(freq0 (1 - freq0) / n)
  std::vector<RunRecord> runs;  // filled when log_runs is set
};

// Hidden variables of run `index`; a pure function of (spec, index).
struct HiddenDraw {
  int partitions = 0;
  double t_f = 0.0;
};
HiddenDraw draw_hidden_variables(const EnsembleSpec& spec, long index);

EnsembleResult run_ensemble(const EnsembleSpec& spec);

// |freq0 - |c1|^2|
double born_deviation(const EnsembleResult& result, const PureStateAmplitudes& amplitudes);

}  // namespace nhm
