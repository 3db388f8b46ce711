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

#pragma once

#include <stdexcept>
#include <string>

namespace nhm {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite numbers, out-of-range parameters, malformed inputs.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A matrix that is not a density matrix, or a Bloch vector outside the ball.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

// The non-Hermitian flow annihilated the state (trace underflow).
class DegenerateEvolutionError : public Error {
 public:
  using Error::Error;
};

// Step-size underflow or loss of positivity/trace during integration.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double time)
      : Error(what + " (t = " + std::to_string(time) + ")"), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

// Spectral analysis failed (defective matrix).
class AnalysisError : public Error {
 public:
  using Error::Error;
};

// A measurement scenario whose window Hamiltonian has no unique attractor.
class DegenerateAttractorError : public Error {
 public:
  using Error::Error;
};

}  // namespace nhm
