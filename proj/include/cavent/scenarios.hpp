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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cavent/building_blocks.hpp"
#include "cavent/negativity.hpp"

namespace cavent {

/// One curve of a sweep: in-state and observed pair (see PairCase).
struct CurveSpec {
  std::string id;
  PairCase pair;
  /// Reported values are N / h^power. 0 picks the power detected at most
  /// grid points, so isolated zeros of the leading coefficient do not make
  /// the curve jump between normalizations.
  int power = 0;
};

struct SweepRequest {
  std::string name = "custom";
  std::vector<CurveSpec> curves;
  double u_start = 0.0;
  double u_stop = 1.0;
  int steps = 101;
  double h = 0.01;
  int n_max = 40;
  std::vector<double> probes;  // empty: default_probes()
  double convergence_gate = 1e-4;
  bool convergence_check = true;
  std::string format = "csv";
  /// Non-fatal remarks from parsing (e.g. a Pauli-blocked curve).
  std::vector<std::string> warnings;

  /// Grid of u values, steps points from u_start to u_stop inclusive.
  std::vector<double> grid() const;
  /// Throws ConfigError.
  void validate() const;
  /// Canonical key = value text; parse_config(canonical()) round-trips.
  std::string canonical() const;
};

/// Flat "key = value" text with one [curve] section per curve. Top-level
/// keys: preset, n_max, steps, u_start, u_stop, h, probes, format,
/// convergence_gate, convergence_check. Curve keys: id, species, state,
/// modes, power. A preset line loads that preset first; later keys override it.
/// Throws ConfigError.
SweepRequest parse_config(std::string_view text);

/// Built-in presets: "fig1a" (four O(h) curves) and "fig1b" (three O(h^2)
/// curves). Throws ConfigError for other names.
SweepRequest preset(std::string_view name);
std::string preset_text(std::string_view name);
std::vector<std::string> preset_names();

struct SweepRow {
  double u = 0.0;
  std::size_t curve = 0;
  /// N(h) / h^p at the request's h, p being the curve's normalization.
  double value = 0.0;
  /// Normalization power (the CSV power column).
  int power = 0;
  /// Power found by the probe ladder at this u; 0 when N vanishes.
  int leading_power = 0;
  double negativity = 0.0;
  /// Leading coefficient of N in h (perturbative).
  double coefficient = 0.0;
  bool ambiguous = false;
  bool converged = true;
};

struct SpotCheck {
  std::size_t curve = 0;
  double u = 0.0;
  double value = 0.0;
  double doubled = 0.0;
  double delta = 0.0;  // relative change with n_max doubled
  bool passed = true;
};

struct SweepResult {
  SweepRequest request;
  /// Ascending u, then curve order.
  std::vector<SweepRow> rows;
  std::vector<SpotCheck> spot_checks;
  std::uint64_t config_hash = 0;

  bool converged() const;
};

struct RunOptions {
  /// 0: one worker per hardware thread.
  unsigned threads = 0;
  CacheOptions cache = CacheOptions::from_environment();
};

/// Evaluates every curve at every grid point, then the n_max-doubled spot
/// checks at the grid points nearest 1/4, 1/2 and 3/4 of the range.
SweepResult run_sweep(const SweepRequest& request, const RunOptions& opts = {});

/// One row's worth of work, exposed for tests and bindings.
/// `power` 0 normalizes by the detected power.
SweepRow evaluate_point(const Bogoliubov& transformation, const PairCase& pair,
                        double u, double h, const std::vector<double>& probes,
                        int power = 0);

void emit_csv(const SweepResult& result, std::ostream& out);
void emit_json(const SweepResult& result, std::ostream& out);

/// Reads rows written by emit_csv (only the CSV columns are restored); curves are matched to `request` by
/// (state, species, mode_a, mode_b). Throws ConfigError on malformed input.
std::vector<SweepRow> read_csv(std::istream& in, const SweepRequest& request);

/// Built-in invariant suite (identity checks, periodicity, convention
/// invariance, closed forms against numerics). Writes one line per check;
/// returns false if any failed.
bool run_checks(int n_max, std::ostream& log, const CacheOptions& cache = CacheOptions::from_environment());

const char* version();

}  // namespace cavent
