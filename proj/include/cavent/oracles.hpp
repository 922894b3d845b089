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
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cavent/series.hpp"

namespace cavent::oracles {

/// Composite Gauss-Legendre rule on [0, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  static QuadratureRule composite(int panels);
  std::size_t size() const { return nodes.size(); }
};

/// Panel count sufficient for modes up to `n_max`.
int default_panels(int n_max);

/// Junction slice shared by the inertial cavity and the uniformly
/// accelerated one, in units of the cavity length. For s in [0, 1] (the
/// fractional position between the walls), `rindler_fraction` is
/// ln(x/a)/ln(b/a) and `scaled_position` is x ln(b/a)/delta. Both are
/// analytic in h through h = 0 and valid for either sign of h.
struct JunctionSlice {
  double h;
  double rindler_fraction(double s) const;
  double scaled_position(double s) const;
};

/// Real overlap coefficients of the inertial -> accelerated junction for the
/// massless Dirichlet scalar, modes 1..n_max.
struct BosonOverlap {
  Eigen::MatrixXd alpha;
  Eigen::MatrixXd beta;
};

BosonOverlap boson_overlap(double h, int n_max, const QuadratureRule& rule);

/// Massless Dirac field with bag walls, kappa in [-n_max, n_max].
Eigen::MatrixXd fermion_overlap(double h, int n_max,
                                const QuadratureRule& rule);

/// Default h-ladder for order extraction: {1, 1/2, 1/4, 1/8} x h_top with
/// h_top = min(0.08, 3.2 / n_max), so that n_max * h stays in the range where
/// the highest mode is still well described by a low-degree polynomial.
std::vector<double> default_ladder(int n_max = 40);

struct OrderSample {
  double h;
  ComplexMatrix value;
};

struct SeriesFit {
  SeriesMatrix series;
  std::vector<double> sample_h;
  /// Max entrywise |value(h) - series(h)| per sample.
  std::vector<double> residual;
  int degree = 0;
};

/// Per-entry least-squares polynomial fit in h, keeping orders 0..2. A
/// sample at h = 0, if present, fixes the constant term exactly and the rest
/// are fitted without one. The fit degree is min(nonzero samples, max_degree); with a symmetric ladder (+h and
/// -h) the O(h^3..h^7) content is fitted and discarded rather than aliased
/// into the kept orders. Throws DiagnosticError when the truncated series
/// fails to approach the samples at O(h^3).
SeriesFit extract_orders(std::span<const OrderSample> samples,
                         int max_degree = 7);

/// Samples both signs of every ladder value.
std::vector<double> symmetric_ladder(std::span<const double> ladder);

// --------------------------------------------------------------------------
// Truncated Fock-space ground truth.

/// Occupation-number basis over a window of modes. Bosons: per-mode cap and
/// a bound on total quanta. Fermions: occupations 0/1, ordered by ascending
/// mode label for the Jordan-Wigner signs.
class FockSpace {
 public:
  static FockSpace bosonic(std::vector<int> modes, int cap, int max_quanta);
  static FockSpace fermionic(std::vector<int> modes, int max_quanta);

  bool fermionic() const { return fermionic_; }
  const std::vector<int>& modes() const { return modes_; }
  std::size_t dimension() const { return keys_.size(); }
  int occupation(std::size_t state, std::size_t mode_pos) const;
  std::size_t mode_position(int mode) const;

  /// Index of the occupation vector, or -1 if outside the space.
  std::int64_t find(const std::vector<int>& occupations) const;
  std::vector<int> occupations(std::size_t state) const;

  using Sparse = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;
  /// Annihilator of the mode at position `mode_pos`, restricted to the space.
  Sparse annihilator(std::size_t mode_pos) const;

 private:
  FockSpace() = default;
  std::uint64_t pack(const std::vector<int>& occ) const;

  bool fermionic_ = false;
  int cap_ = 1;
  std::vector<int> modes_;
  std::vector<std::uint64_t> keys_;
};

struct OracleState {
  ComplexVector amplitudes;
  /// <psi| sum_n a_n^+ a_n |psi> for the in-annihilators (vacuum solve).
  double residual = 0.0;

  Complex amplitude(const FockSpace& space,
                    const std::vector<int>& occupations) const;
};

/// In-vacuum: minimizes sum_n |a_n psi|^2 over the space with
/// a_n = sum_m (alpha_mn b_m + conj(beta_mn) b_m^+), where alpha and beta
/// are numeric and restricted to the window (rows/cols follow space.modes()).
OracleState fock_vacuum(const FockSpace& space, const ComplexMatrix& alpha,
                        const ComplexMatrix& beta);

/// Fermionic in-vacuum: annihilated by b_n (n >= 0) and c_n (n < 0) where
/// b_n = sum_{m>=0} A_mn b~_m + sum_{m<0} A_mn c~_m^+ and
/// c_n = sum_{m>=0} conj(A_mn) b~_m^+ + sum_{m<0} conj(A_mn) c~_m.
OracleState fock_vacuum(const FockSpace& space, const ComplexMatrix& A);

/// a_k^+ psi for bosons, normalized.
OracleState fock_apply_instate(const FockSpace& space, const OracleState& vac,
                               const ComplexMatrix& alpha,
                               const ComplexMatrix& beta, int k);

/// b_kappa^+ psi (one particle) or b_kappa^+ c_kappa'^+ psi (pair), normalized.
OracleState fock_apply_instate(const FockSpace& space, const OracleState& vac,
                               const ComplexMatrix& A, int kappa);
OracleState fock_apply_instate(const FockSpace& space, const OracleState& vac,
                               const ComplexMatrix& A, int kappa,
                               int kappa_prime);

/// Reduced density matrix of two window modes, basis index
/// n_a * (cap + 1) + n_b. Fermionic amplitudes are reordered so the creators
/// of mode_a, then mode_b, stand first.
ComplexMatrix reduced_pair(const FockSpace& space, const OracleState& psi,
                           int mode_a, int mode_b, int cap);

}  // namespace cavent::oracles
