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
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cavent/bogoliubov.hpp"

namespace cavent {

/// Out-Fock basis vector: occupied mode labels, sorted ascending, with
/// repeats for bosonic multiple occupation.
class FockKey {
 public:
  static constexpr int kMaxQuanta = 8;

  FockKey() = default;
  explicit FockKey(std::initializer_list<int> labels);

  int size() const { return size_; }
  int label(int i) const { return labels_[i]; }
  int count(int mode) const;
  bool empty() const { return size_ == 0; }

  /// Copy with one quantum of `mode` added or removed. Removing an absent
  /// mode is a contract violation.
  FockKey with(int mode) const;
  FockKey without(int mode) const;
  /// Copy with every quantum of the given modes removed.
  FockKey rest(int mode_a, int mode_b) const;

  friend bool operator==(const FockKey&, const FockKey&) = default;
  friend auto operator<=>(const FockKey&, const FockKey&) = default;

 private:
  std::array<std::int16_t, kMaxQuanta> labels_{};
  std::int8_t size_ = 0;
};

struct FockKeyHash {
  std::size_t operator()(const FockKey& k) const;
};

/// Global order of fermionic creation operators defining basis signs:
/// |..> = (product of creators in this order)|0>.
enum class FermionOrdering { ascending, descending };

/// In-state written in the out-Fock basis, amplitudes to O(h^2). Entries
/// are sorted by key; identically zero amplitudes are pruned.
struct StateExpansion {
  Species species = Species::boson;
  FermionOrdering ordering = FermionOrdering::ascending;
  std::vector<std::pair<FockKey, H2Series>> amplitudes;

  H2Series amplitude(const FockKey& key) const;
  H2Series norm_squared() const;
  /// Largest coefficient magnitude on keys whose net charge differs from
  /// `charge` (fermions only).
  double charge_violation(int charge) const;
};

/// V = -conj(beta) alpha^-1 and the vacuum normalization, to O(h^2).
struct BosonVacuumData {
  SeriesMatrix V;
  H2Series norm;

  H2Series at(int p, int q) const { return V(p - 1, q - 1); }
};

/// Pair amplitudes of the fermionic vacuum over (p >= 0, q < 0): row p,
/// column -q - 1.
struct FermionVacuumData {
  int n_max = 0;
  SeriesMatrix V;
  H2Series norm;
  /// Disagreement between the particle and antiparticle annihilation
  /// conditions on the interior window.
  double consistency = 0.0;

  H2Series at(int p, int q) const { return V(p, -q - 1); }
};

BosonVacuumData boson_vacuum_data(const BosonBogoliubov& b);

/// Throws DiagnosticError when the two annihilation conditions disagree by
/// more than `tol` on the interior window.
FermionVacuumData fermion_vacuum_data(const FermionBogoliubov& f, double tol = 1e-4);

/// Optional restriction to a pair of observed modes: O(h^2) amplitudes on
/// keys whose unobserved part differs from that of every O(1) key are not
/// materialized. They never reach the reduced density matrix of that pair
/// at O(h^2).
struct ExpansionOptions {
  std::optional<std::pair<int, int>> focus;
  FermionOrdering ordering = FermionOrdering::ascending;
};

StateExpansion boson_vacuum_expansion(const BosonVacuumData& data,
                                      const ExpansionOptions& opts = {});

/// a_k^+ applied to the vacuum expansion, normalized.
StateExpansion boson_one_particle_expansion(const BosonBogoliubov& b,
                                            const BosonVacuumData& data, int k,
                                            const ExpansionOptions& opts = {});

enum class FermionInKind { vacuum, one_particle, pair };

struct FermionInState {
  FermionInKind kind = FermionInKind::vacuum;
  int kappa = 0;
  int kappa_prime = -1;

  static FermionInState vacuum() { return {}; }
  static FermionInState one_particle(int kappa) {
    return {FermionInKind::one_particle, kappa, -1};
  }
  static FermionInState pair(int kappa, int kappa_prime) {
    return {FermionInKind::pair, kappa, kappa_prime};
  }
  /// Net charge (particles minus antiparticles).
  int charge() const { return kind == FermionInKind::one_particle ? 1 : 0; }
};

StateExpansion fermion_state_expansion(const FermionBogoliubov& f,
                                       const FermionVacuumData& data,
                                       const FermionInState& in,
                                       const ExpansionOptions& opts = {});

/// Two-mode reduced density matrix, basis index n_a * (cap + 1) + n_b.
/// Fermionic amplitudes are reordered so the observed creators come first
/// (a, then b) before the partial trace.
struct ReducedDensityMatrix {
  Species species = Species::boson;
  int mode_a = 0;
  int mode_b = 0;
  int cap = 0;
  SeriesMatrix rho;
  /// Keys dropped for exceeding the cap; only amplitudes whose O(1) and O(h)
  /// parts vanish (below 1e-12) may be.
  int dropped = 0;

  int dimension() const { return (cap + 1) * (cap + 1); }
  int index(int n_a, int n_b) const { return n_a * (cap + 1) + n_b; }
};

/// cap < 0 selects 4 for bosons and 1 for fermions.
ReducedDensityMatrix reduce_to_pair(const StateExpansion& state, int mode_a,
                                    int mode_b, int cap = -1);

}  // namespace cavent
