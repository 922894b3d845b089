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

#include "cavent/bogoliubov.hpp"

#include <algorithm>
#include <cmath>

#include "cavent/errors.hpp"

namespace cavent {

const char* to_string(Species s) {
  return s == Species::boson ? "boson" : "fermion";
}

namespace {

void check_order_zero(const ComplexMatrix& a0, double tol, const char* what) {
  for (Eigen::Index i = 0; i < a0.rows(); ++i) {
    for (Eigen::Index j = 0; j < a0.cols(); ++j) {
      const double mag = std::abs(a0(i, j));
      if (i == j ? std::abs(mag - 1.0) > tol : mag > tol) {
        throw ContractViolation(std::string(what) +
                                ": order-zero part is not a diagonal of "
                                "unit-modulus phases");
      }
    }
  }
}

void check_finite(const SeriesMatrix& m, const char* what) {
  for (int k = 0; k < 3; ++k) {
    if (!m.order(k).allFinite()) {
      throw ContractViolation(std::string(what) + ": non-finite coefficient");
    }
  }
}

// Largest |M_ij - expected_ij| over the leading `w` x `w` block starting at
// `offset`.
double window_residual(const ComplexMatrix& m, Eigen::Index offset,
                       Eigen::Index w, bool subtract_identity) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < w; ++i) {
    for (Eigen::Index j = 0; j < w; ++j) {
      Complex v = m(offset + i, offset + j);
      if (subtract_identity && i == j) v -= 1.0;
      r = std::max(r, std::abs(v));
    }
  }
  return r;
}

}  // namespace

BosonBogoliubov BosonBogoliubov::identity(int n_max) {
  if (n_max <= 0) throw ContractViolation("n_max must be positive");
  return {SeriesMatrix::Identity(n_max), SeriesMatrix::Zero(n_max, n_max)};
}

void BosonBogoliubov::validate(double tol) const {
  if (alpha.rows() != alpha.cols() || beta.rows() != alpha.rows() ||
      beta.cols() != alpha.cols() || alpha.rows() == 0) {
    throw ContractViolation("BosonBogoliubov: alpha/beta shapes differ");
  }
  check_finite(alpha, "BosonBogoliubov alpha");
  check_finite(beta, "BosonBogoliubov beta");
  check_order_zero(alpha.order(0), tol, "BosonBogoliubov alpha");
  if (beta.max_abs(0) > tol) {
    throw ContractViolation("BosonBogoliubov: beta has an order-zero part");
  }
}

FermionBogoliubov FermionBogoliubov::identity(int n_max) {
  if (n_max < 0) throw ContractViolation("n_max must be non-negative");
  return {n_max, SeriesMatrix::Identity(2 * n_max + 1)};
}

void FermionBogoliubov::validate(double tol) const {
  if (A.rows() != size() || A.cols() != size()) {
    throw ContractViolation("FermionBogoliubov: A is not (2 n_max + 1) square");
  }
  check_finite(A, "FermionBogoliubov A");
  check_order_zero(A.order(0), tol, "FermionBogoliubov A");
}

BosonBogoliubov compose(const BosonBogoliubov& second,
                        const BosonBogoliubov& first) {
  if (second.n_max() != first.n_max()) {
    throw ContractViolation("compose: truncation sizes differ");
  }
  return {second.alpha * first.alpha + second.beta * first.beta.conjugate(),
          second.alpha * first.beta + second.beta * first.alpha.conjugate()};
}

FermionBogoliubov compose(const FermionBogoliubov& second,
                          const FermionBogoliubov& first) {
  if (second.n_max != first.n_max) {
    throw ContractViolation("compose: truncation sizes differ");
  }
  return {first.n_max, second.A * first.A};
}

Bogoliubov compose(const Bogoliubov& second, const Bogoliubov& first) {
  if (second.index() != first.index()) {
    throw ContractViolation("compose: field species differ");
  }
  return std::visit(
      [&](const auto& s) -> Bogoliubov {
        using T = std::decay_t<decltype(s)>;
        return compose(s, std::get<T>(first));
      },
      second);
}

BosonBogoliubov invert(const BosonBogoliubov& b) {
  return {b.alpha.adjoint(), -b.beta.transpose()};
}

FermionBogoliubov invert(const FermionBogoliubov& b) {
  return {b.n_max, b.A.adjoint()};
}

Bogoliubov invert(const Bogoliubov& b) {
  return std::visit([](const auto& x) -> Bogoliubov { return invert(x); }, b);
}

double IdentityResiduals::max() const {
  double r = 0.0;
  for (int k = 0; k < 3; ++k) r = std::max({r, normalization[k], symmetry[k]});
  return r;
}

IdentityResiduals identity_check(const BosonBogoliubov& b, int window) {
  const int w = window > 0 ? std::min(window, b.n_max())
                           : std::max(1, b.n_max() / 2);
  const SeriesMatrix norm =
      b.alpha * b.alpha.adjoint() - b.beta * b.beta.adjoint();
  const SeriesMatrix sym =
      b.alpha * b.beta.transpose() - b.beta * b.alpha.transpose();
  IdentityResiduals r;
  r.window = w;
  for (int k = 0; k < 3; ++k) {
    r.normalization[k] = window_residual(norm.order(k), 0, w, k == 0);
    r.symmetry[k] = window_residual(sym.order(k), 0, w, false);
  }
  return r;
}

IdentityResiduals identity_check(const FermionBogoliubov& b, int window) {
  const int w = window > 0 ? std::min(window, b.n_max) : b.n_max / 2;
  const SeriesMatrix left = b.A * b.A.adjoint();
  const SeriesMatrix right = b.A.adjoint() * b.A;
  IdentityResiduals r;
  r.window = w;
  for (int k = 0; k < 3; ++k) {
    r.normalization[k] =
        window_residual(left.order(k), b.n_max - w, 2 * w + 1, k == 0);
    r.symmetry[k] =
        window_residual(right.order(k), b.n_max - w, 2 * w + 1, k == 0);
  }
  return r;
}

IdentityResiduals identity_check(const ComplexMatrix& alpha,
                                 const ComplexMatrix& beta, int window) {
  IdentityResiduals r;
  r.window = window;
  r.normalization[0] = window_residual(
      alpha * alpha.adjoint() - beta * beta.adjoint(), 0, window, true);
  r.symmetry[0] = window_residual(
      alpha * beta.transpose() - beta * alpha.transpose(), 0, window, false);
  return r;
}

IdentityResiduals identity_check(const ComplexMatrix& A, int n_max,
                                 int window) {
  IdentityResiduals r;
  r.window = window;
  r.normalization[0] =
      window_residual(A * A.adjoint(), n_max - window, 2 * window + 1, true);
  r.symmetry[0] =
      window_residual(A.adjoint() * A, n_max - window, 2 * window + 1, true);
  return r;
}

namespace {
void check_h(double h) {
  if (!(h >= 0.0 && h < 0.5)) {
    throw PerturbativeRangeError(
        "evaluate_at: h outside the perturbative range [0, 0.5)");
  }
}
}  // namespace

BosonMatrices evaluate_at(const BosonBogoliubov& b, double h) {
  check_h(h);
  return {b.alpha.evaluate(h), b.beta.evaluate(h)};
}

ComplexMatrix evaluate_at(const FermionBogoliubov& b, double h) {
  check_h(h);
  return b.A.evaluate(h);
}

BosonBogoliubov diagonal_boson(const ComplexVector& phases) {
  const auto n = phases.size();
  BosonBogoliubov b{SeriesMatrix::Zero(n, n), SeriesMatrix::Zero(n, n)};
  b.alpha.order(0) = phases.asDiagonal();
  return b;
}

FermionBogoliubov diagonal_fermion(const ComplexVector& phases) {
  const auto n = phases.size();
  if (n % 2 == 0) throw ContractViolation("fermion phases need odd length");
  FermionBogoliubov b{static_cast<int>(n / 2), SeriesMatrix::Zero(n, n)};
  b.A.order(0) = phases.asDiagonal();
  return b;
}

}  // namespace cavent
