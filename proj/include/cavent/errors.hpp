// Copyright 2026 The cavent Authors
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

namespace cavent {

/// Raised when a caller breaks an operation's preconditions (size or species
/// mismatch, invalid mode labels, Pauli conflicts, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when a numerical procedure fails its own self-check: oracle
/// non-convergence, fit residuals out of tolerance, ambiguous slopes.
class DiagnosticError : public std::runtime_error {
 public:
  DiagnosticError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  explicit DiagnosticError(const std::string& what)
      : DiagnosticError(what, 0.0) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Evaluation requested outside the regime where the O(h^2) series is
/// meaningful.
class PerturbativeRangeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or inconsistent sweep configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cavent
