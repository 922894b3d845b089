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

#include <array>
#include <variant>

#include "cavent/series.hpp"

namespace cavent {

enum class Species { boson, fermion };

const char* to_string(Species s);

/// Perturbative scalar-field Bogoliubov transformation between two mode
/// bases: new_m = sum_n (alpha_mn old_n + beta_mn conj(old_n)). Coefficients
/// are h-stripped: entry (m, n) of alpha.order(k) multiplies h^k. Mode n >= 1
/// sits at index n - 1.
struct BosonBogoliubov {
  SeriesMatrix alpha;
  SeriesMatrix beta;

  static BosonBogoliubov identity(int n_max);

  int n_max() const { return static_cast<int>(alpha.rows()); }
  static int index(int mode) { return mode - 1; }

  /// Unit-modulus order-zero phases G_j.
  ComplexVector phases() const { return alpha.order(0).diagonal(); }

  /// Checks shapes, finiteness and the order-zero structure (diagonal,
  /// unit-modulus alpha; vanishing beta). Throws ContractViolation.
  void validate(double tol = 1e-9) const;
};

/// Perturbative Dirac-field transformation new_m = sum_n A_mn old_n over
/// kappa in [-n_max, n_max]; kappa >= 0 are particle (positive charge)
/// modes, kappa < 0 antiparticle modes.
struct FermionBogoliubov {
  int n_max = 0;
  SeriesMatrix A;

  static FermionBogoliubov identity(int n_max);

  int size() const { return 2 * n_max + 1; }
  int index(int kappa) const { return kappa + n_max; }
  int kappa(int index) const { return index - n_max; }
  bool contains(int kappa) const { return kappa >= -n_max && kappa <= n_max; }

  ComplexVector phases() const { return A.order(0).diagonal(); }

  void validate(double tol = 1e-9) const;
};

using Bogoliubov = std::variant<BosonBogoliubov, FermionBogoliubov>;

/// Applies `first`, then `second`.
BosonBogoliubov compose(const BosonBogoliubov& second,
                        const BosonBogoliubov& first);
FermionBogoliubov compose(const FermionBogoliubov& second,
                          const FermionBogoliubov& first);
Bogoliubov compose(const Bogoliubov& second, const Bogoliubov& first);

BosonBogoliubov invert(const BosonBogoliubov& b);
FermionBogoliubov invert(const FermionBogoliubov& b);
Bogoliubov invert(const Bogoliubov& b);

/// Residuals of the order-by-order Bogoliubov identities, index [k] for h^k.
/// Bosons: `normalization` is alpha alpha^+ - beta beta^+ - 1 and `symmetry`
/// is alpha beta^T - beta alpha^T. Fermions: `normalization` is A A^+ - 1 and
/// `symmetry` is A^+ A - 1.
struct IdentityResiduals {
  std::array<double, 3> normalization{};
  std::array<double, 3> symmetry{};
  int window = 0;

  double max() const;
  bool within(double tol) const { return max() < tol; }
};

/// Window defaults to the interior half: modes [1, n_max/2] for bosons,
/// [-n_max/2, n_max/2] for fermions.
IdentityResiduals identity_check(const BosonBogoliubov& b, int window = 0);
IdentityResiduals identity_check(const FermionBogoliubov& b, int window = 0);

/// Same identities evaluated on plain numeric matrices (finite h).
IdentityResiduals identity_check(const ComplexMatrix& alpha,
                                 const ComplexMatrix& beta, int window);
IdentityResiduals identity_check(const ComplexMatrix& A, int n_max, int window);

struct BosonMatrices {
  ComplexMatrix alpha;
  ComplexMatrix beta;
};

/// Sums the series at h. Throws PerturbativeRangeError outside [0, 0.5).
BosonMatrices evaluate_at(const BosonBogoliubov& b, double h);
ComplexMatrix evaluate_at(const FermionBogoliubov& b, double h);

/// Diagonal transformation with the given per-mode phases.
BosonBogoliubov diagonal_boson(const ComplexVector& phases);
FermionBogoliubov diagonal_fermion(const ComplexVector& phases);

}  // namespace cavent
