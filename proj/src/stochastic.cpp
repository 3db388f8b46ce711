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

#include "nhm/stochastic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "nhm/errors.hpp"

namespace nhm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Unbiased integer in [0, n) by rejection.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

}  // namespace

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Zero: return "zero";
    case Outcome::One: return "one";
    case Outcome::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

SingleRunResult single_run(const PureStateAmplitudes& amplitudes, double gamma, double t_i, double t_f,
                           int partitions, WaveMode g_mode, const DensityMatrix& rho0,
                           const SingleRunOptions& opts) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("single_run: gamma must be > 0");
  if (!(opts.threshold > 0.5 && opts.threshold < 1.0)) {
    throw ValidationError("single_run: threshold must lie in (0.5, 1)");
  }
  if (rho0.dim() != 2) throw DimensionError("single_run: requires a qubit state");
  const double wave_end = std::isnan(opts.wave_t_f) ? t_f : opts.wave_t_f;
  const HiddenVariableWave wave(amplitudes.p0(), partitions, t_i, wave_end, g_mode, opts.fourier_terms);
  const double sharp = opts.switching_sharpness > 0.0 ? opts.switching_sharpness : gamma;
  const SwitchedHamiltonian h =
      stochastic_hamiltonian(amplitudes, gamma, SwitchingProfile::tanh_window(sharp, t_i, t_f), wave);

  const double t0 = t_i - 10.0 / gamma;
  const double t1 = t_f + 10.0 / gamma;
  IntegratorControl ctrl = opts.control;
  if (!opts.keep_trajectory && !(ctrl.sample_every > 0.0)) ctrl.sample_every = t1 - t0;
  Trajectory traj = evolve_ode(h, rho0, t0, t1, ctrl);

  SingleRunResult r;
  const std::size_t last = traj.size() - 1;
  r.population0 = traj.population(last, 0);
  r.population1 = traj.population(last, 1);
  if (r.population0 > opts.threshold) {
    r.outcome = Outcome::Zero;
  } else if (r.population1 > opts.threshold) {
    r.outcome = Outcome::One;
  } else {
    r.outcome = Outcome::Indeterminate;
  }
  if (opts.keep_trajectory) r.trajectory = std::move(traj);
  return r;
}

void validate(const EnsembleSpec& s) {
  if (!(s.gamma > 0.0) || !std::isfinite(s.gamma)) throw ValidationError("ensemble: gamma must be > 0");
  if (!std::isfinite(s.t_i)) throw ValidationError("ensemble: t_i must be finite");
  if (!(s.window > 0.0) || !std::isfinite(s.window)) throw ValidationError("ensemble: window must be > 0");
  if (s.n_runs < 1) throw ValidationError("ensemble: n_runs must be >= 1");
  const PartitionLaw& p = s.partitions;
  if (p.kind == PartitionLaw::Kind::Fixed) {
    if (p.fixed < 2 || p.fixed % 2 != 0) throw ValidationError("ensemble: fixed N must be even and >= 2");
  } else {
    if (p.min < 2 || p.min % 2 != 0 || p.max % 2 != 0 || p.max < p.min) {
      throw ValidationError("ensemble: N range must hold even values with 2 <= min <= max");
    }
  }
  if (!(s.threshold > 0.5 && s.threshold < 1.0)) throw ValidationError("ensemble: threshold in (0.5, 1)");
}

HiddenDraw draw_hidden_variables(const EnsembleSpec& spec, long index) {
  std::mt19937_64 rng(splitmix64(spec.seed ^ splitmix64(static_cast<std::uint64_t>(index))));
  HiddenDraw d;
  if (spec.partitions.kind == PartitionLaw::Kind::Fixed) {
    d.partitions = spec.partitions.fixed;
  } else {
    const auto choices = static_cast<std::uint64_t>((spec.partitions.max - spec.partitions.min) / 2 + 1);
    d.partitions = spec.partitions.min + 2 * static_cast<int>(bounded(rng, choices));
  }
  const double t_end = spec.t_i + spec.window;
  d.t_f = t_end;
  if (spec.tf_jitter == TfJitter::OnePeriod) {
    const double period = 2.0 * spec.window / d.partitions;
    d.t_f = t_end - period + period * unit_uniform(rng);
  }
  return d;
}

EnsembleResult run_ensemble(const EnsembleSpec& spec) {
  validate(spec);
  const long n = spec.n_runs;
  std::vector<RunRecord> records(static_cast<std::size_t>(n));
  const DensityMatrix rho0 = spec.amplitudes.density();
  SingleRunOptions opts;
  opts.wave_t_f = spec.t_i + spec.window;
  opts.switching_sharpness = spec.switching_sharpness;
  opts.fourier_terms = spec.fourier_terms;
  opts.threshold = spec.threshold;
  opts.control = spec.control;

  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&]() {
    for (long i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        const HiddenDraw d = draw_hidden_variables(spec, i);
        const SingleRunResult r =
            single_run(spec.amplitudes, spec.gamma, spec.t_i, d.t_f, d.partitions, spec.g_mode, rho0, opts);
        records[static_cast<std::size_t>(i)] = {i, d.partitions, d.t_f, r.outcome, r.population0,
                                                r.population1};
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
  };

  unsigned threads = spec.threads > 0 ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<long>(threads, n));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  EnsembleResult out;
  out.n_runs = n;
  for (const RunRecord& r : records) {
    switch (r.outcome) {
      case Outcome::Zero: ++out.count0; break;
      case Outcome::One: ++out.count1; break;
      case Outcome::Indeterminate: ++out.count_indeterminate; break;
    }
  }
  const double dn = static_cast<double>(n);
  out.freq0 = static_cast<double>(out.count0) / dn;
  out.freq1 = static_cast<double>(out.count1) / dn;
  out.indeterminate = static_cast<double>(out.count_indeterminate) / dn;
  out.std_error = std::sqrt(out.freq0 * (1.0 - out.freq0) / dn);
  if (spec.log_runs) out.runs = std::move(records);
  return out;
}

double born_deviation(const EnsembleResult& result, const PureStateAmplitudes& amplitudes) {
  if (result.n_runs < 1) throw ValidationError("born_deviation: empty ensemble");
  return std::abs(result.freq0 - amplitudes.p0());
}

}  // namespace nhm
