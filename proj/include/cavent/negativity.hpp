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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cavent/bogoliubov.hpp"
#include "cavent/states.hpp"

namespace cavent {

enum class Factor { first, second };

/// Partial transpose of the two-mode density matrix on one factor.
SeriesMatrix partial_transpose(const ReducedDensityMatrix& rho,
                               Factor on = Factor::second);

/// Eigenvalues of the matrix evaluated at h, ascending. Throws
/// ContractViolation when it deviates from Hermitian by more than 1e-10.
Eigen::VectorXd pt_eigenvalues(const SeriesMatrix& pt, double h);

/// Minus the sum of the negative eigenvalues at h. An eigenvalue counts as
/// negative below -1e-12 times the matrix 1-norm.
double negativity_numeric(const SeriesMatrix& pt, double h);

/// Probe ladder used by leading_order.
std::vector<double> default_probes();

struct LeadingOrder {
  bool zero = false;
  /// Set by analyze() when the slope test failed and the power was taken
  /// from the perturbative coefficients instead.
  bool ambiguous = false;
  int power = 0;
  /// Coefficient c in N = c h^power + ..., from degenerate perturbation
  /// theory on the series coefficients.
  double coefficient = 0.0;
  /// Same coefficient from Richardson extrapolation of N / h^power.
  double extrapolated = 0.0;
  double slope = 0.0;
  std::vector<double> probes;
  std::vector<double> values;
};

/// Leading power from the log-log slope over the probes (must lie within
/// 0.05 of 1 or 2). When it does not, the ladder is scaled down by 10, up to
/// three times, before DiagnosticError is thrown. `probes` in the result
/// holds the ladder finally used. `zero` is set when the negativity
/// vanishes at every probe.
LeadingOrder leading_order(const SeriesMatrix& pt,
                           std::span<const double> probes = {});

/// Negativity coefficients at O(h) and O(h^2) from degenerate perturbation
/// theory about the kernel of the order-zero matrix. The O(h^2) one is only
/// meaningful when the O(h) one vanishes.
std::array<double, 2> perturbative_coefficients(const SeriesMatrix& pt);

/// h-stripped first-order sums with exclusions:
///   f_beta(m, n)  = 1/2 sum_{q != n} |beta1_qm|^2
///   f_A(m, n)     = 1/2 sum_{q >= 0, q != n} |A1_qm|^2
///   fbar_A(m, n)  = 1/2 sum_{q < 0, q != n} |A1_qm|^2
/// Passing no exclusion sums over every q.
struct LeadingOrderSums {
  Species species = Species::boson;
  int n_max = 0;
  ComplexMatrix first_order;

  explicit LeadingOrderSums(const BosonBogoliubov& b);
  explicit LeadingOrderSums(const FermionBogoliubov& f);

  double f_beta(int m, std::optional<int> excluded = std::nullopt) const;
  double f_A(int m, std::optional<int> excluded = std::nullopt) const;
  double fbar_A(int m, std::optional<int> excluded = std::nullopt) const;
};

enum class InStateKind { vacuum, one_particle, pair };

const char* to_string(InStateKind k);

/// In-state and observed pair. A one-particle state is excited in mode_a;
/// a fermionic pair state in mode_a (particle) and mode_b (antiparticle).
struct PairCase {
  Species species = Species::boson;
  InStateKind state = InStateKind::vacuum;
  int mode_a = 1;
  int mode_b = 2;

  /// Species and charge rules. Throws ContractViolation.
  void validate(int n_max) const;
};

struct ClosedFormEigenvalue {
  std::string name;
  /// Value at the requested h.
  double value = 0.0;
  /// value = coefficient h^power + higher orders.
  int power = 0;
  double coefficient = 0.0;
};

/// Potentially negative partial-transpose eigenvalues assembled from the
/// Bogoliubov coefficients. Empty when the case has no closed form (boson
/// one-particle state with a same-parity pair, and the Pauli-blocked
/// fermion one-particle case).
std::vector<ClosedFormEigenvalue> closed_form_eigenvalues(const Bogoliubov& b,
                                                          const PairCase& c,
                                                          double h);

/// Minus the sum of the negative closed-form eigenvalues.
std::optional<double> closed_form_negativity(
    const std::vector<ClosedFormEigenvalue>& values);

struct AnalysisOptions {
  double h = 0.01;
  std::vector<double> probes;  // empty: default_probes()
  bool focus = true;
  FermionOrdering ordering = FermionOrdering::ascending;
  bool closed_forms = true;
};

struct NegativityReport {
  PairCase pair;
  double h = 0.0;
  std::vector<double> pt_eigenvalues;
  double negativity = 0.0;
  LeadingOrder leading;
  std::vector<ClosedFormEigenvalue> closed_form;
  /// |trace(rho) - 1| summed over the h^1, h^2 coefficients.
  double trace_defect = 0.0;
  int dropped_keys = 0;
};

/// Builds the in-state, reduces it to the observed pair and analyses the
/// partial transpose.
NegativityReport analyze(const Bogoliubov& b, const PairCase& c,
                         const AnalysisOptions& opts = {});

/// Reduced density matrix for the case (shared by analyze and the tests).
ReducedDensityMatrix reduced_state(const Bogoliubov& b, const PairCase& c,
                                   bool focus = true,
                                   FermionOrdering ordering = FermionOrdering::ascending);

}  // namespace cavent
