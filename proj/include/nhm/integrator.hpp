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

// integrator.hpp: Dormand-Prince 5(4) with dense output, generic over Eigen
// dense state types (real or complex, vector or matrix).

#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nhm/errors.hpp"

namespace nhm {

struct StepControl {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  // 0 selects the step automatically
  long max_steps = 10'000'000;
};

struct StepStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
};

namespace detail {

namespace dp5 {
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                        a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                        a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace dp5

template <class State>
double error_norm(const State& err, const State& y0, const State& y1, const StepControl& c) {
  const auto scale = c.abs_tol + c.rel_tol * y0.array().abs2().max(y1.array().abs2()).sqrt();
  const double v = (err.array().abs2() / scale.square()).mean();
  return std::sqrt(v);
}

}  // namespace detail

/// Integrates y' = f(t, regime, y) over [t0, t1].
///
/// The span is cut at `breakpoints`; within each piece `regime` is the piece
/// midpoint, so piecewise-constant coefficients are evaluated consistently.
/// After every accepted step `hygiene(t, y)` may project the state and returns
/// whether it changed it. `sample(t, y)` is called for each entry of the
/// sorted `sample_times` (dense output between steps, hygiene applied).
template <class State, class Rhs, class Hygiene, class Sampler>
StepStats integrate_dp5(Rhs&& f, Hygiene&& hygiene, Sampler&& sample, State y, double t0, double t1,
                        std::vector<double> breakpoints, const std::vector<double>& sample_times,
                        const StepControl& ctrl) {
  using namespace detail::dp5;
  StepStats stats;
  if (!(t0 < t1)) throw ValidationError("integrate: requires t0 < t1");
  if (!(ctrl.rel_tol > 0.0) || !(ctrl.abs_tol > 0.0)) {
    throw ValidationError("integrate: tolerances must be positive");
  }

  std::vector<double> edges{t0};
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double b : breakpoints) {
    if (b > edges.back() && b < t1) edges.push_back(b);
  }
  edges.push_back(t1);

  const double span = t1 - t0;
  const double max_step = std::min(ctrl.max_step, span);
  std::size_t next_sample = 0;
  const auto emit_upto = [&](double t_end, double t_start, const auto& at) {
    const double tie = 1e-13 * std::max(1.0, std::abs(t_end));
    while (next_sample < sample_times.size() && sample_times[next_sample] <= t_end + tie) {
      const double s = sample_times[next_sample];
      if (s >= t_start - tie) at(s, s >= t_end - tie);
      ++next_sample;
    }
  };

  double h = ctrl.initial_step;
  hygiene(t0, y);
  emit_upto(t0, t0 - 1.0, [&](double s, bool) { sample(s, y); });

  for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
    const double a = edges[seg];
    const double b = edges[seg + 1];
    const double regime = 0.5 * (a + b);
    double t = a;
    State k1 = f(t, regime, y);
    ++stats.evaluations;

    if (!(h > 0.0)) {
      // Initial step heuristic of Hairer, Norsett and Wanner.
      const auto sc = ctrl.abs_tol + ctrl.rel_tol * y.array().abs();
      const double d0 = std::sqrt((y.array().abs() / sc).square().mean());
      const double d1n = std::sqrt((k1.array().abs() / sc).square().mean());
      double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
      h0 = std::min(h0, b - a);
      State y1 = y + h0 * k1;
      State f1 = f(t + h0, regime, y1);
      ++stats.evaluations;
      const double d2 = std::sqrt(((f1 - k1).array().abs() / sc).square().mean()) / h0;
      const double dm = std::max(d1n, d2);
      const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
      h = std::min(100.0 * h0, h1);
    }
    h = std::min(h, max_step);

    bool last_rejected = false;
    while (t < b) {
      if (stats.accepted + stats.rejected >= ctrl.max_steps) {
        throw IntegrationError("integrate: step budget exhausted", t);
      }
      const double remaining = b - t;
      const double h_planned = h;
      bool final_step = false;
      if (h >= remaining * (1.0 - 1e-12)) {
        h = remaining;
        final_step = true;
      }
      const double min_h = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
      if (h < min_h) throw IntegrationError("integrate: step size underflow", t);

      const State k2 = f(t + c2 * h, regime, State(y + h * (a21 * k1)));
      const State k3 = f(t + c3 * h, regime, State(y + h * (a31 * k1 + a32 * k2)));
      const State k4 = f(t + c4 * h, regime, State(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
      const State k5 =
          f(t + c5 * h, regime, State(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
      const State k6 = f(t + h, regime,
                         State(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
      const State y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      const State k7 = f(t + h, regime, y_new);
      stats.evaluations += 6;

      const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double en = detail::error_norm(err, y, y_new, ctrl);
      if (!std::isfinite(en)) en = std::numeric_limits<double>::infinity();

      if (en > 1.0) {
        ++stats.rejected;
        const double fac = std::isfinite(en) ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.2;
        h *= fac;
        last_rejected = true;
        continue;
      }

      ++stats.accepted;
      const double t_new = final_step ? b : t + h;
      const State ydiff = y_new - y;
      const State bspl = h * k1 - ydiff;
      const State r4 = ydiff - h * k7 - bspl;
      const State r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

      State y_next = y_new;
      const bool changed = hygiene(t_new, y_next);

      emit_upto(t_new, t, [&](double s, bool at_end) {
        if (at_end) {
          sample(s, y_next);
          return;
        }
        const double theta = (s - t) / h;
        const double theta1 = 1.0 - theta;
        State ys = y + theta * (ydiff + theta1 * (bspl + theta * (r4 + theta1 * r5)));
        hygiene(s, ys);
        sample(s, ys);
      });

      t = t_new;
      y = y_next;
      if (changed) {
        k1 = f(t, regime, y);
        ++stats.evaluations;
      } else {
        k1 = k7;
      }

      double fac = en == 0.0 ? 10.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 10.0);
      if (last_rejected) fac = std::min(fac, 1.0);
      last_rejected = false;
      h = std::min(final_step ? std::max(h_planned, h * fac) : h * fac, max_step);
    }
  }
  return stats;
}

}  // namespace nhm
