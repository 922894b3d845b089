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
#include <complex>

#include <Eigen/Dense>

namespace cavent {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Quantity known to second order in h: c0 + c1 h + c2 h^2. Products
/// discard everything of degree three and higher.
class H2Series {
 public:
  static constexpr int kOrders = 3;

  constexpr H2Series() = default;
  constexpr H2Series(Complex c0, Complex c1 = {}, Complex c2 = {})
      : c_{c0, c1, c2} {}
  constexpr H2Series(double c0) : c_{Complex(c0), Complex(), Complex()} {}

  constexpr Complex operator[](int order) const { return c_[order]; }
  constexpr Complex& operator[](int order) { return c_[order]; }

  Complex evaluate(double h) const { return c_[0] + h * (c_[1] + h * c_[2]); }

  H2Series conj() const {
    return {std::conj(c_[0]), std::conj(c_[1]), std::conj(c_[2])};
  }

  /// Lowest order with a nonzero coefficient, or kOrders when all vanish.
  int leading_order() const {
    for (int k = 0; k < kOrders; ++k) {
      if (c_[k] != Complex()) return k;
    }
    return kOrders;
  }

  bool is_zero() const { return leading_order() == kOrders; }
  bool is_finite() const;

  H2Series& operator+=(const H2Series& o) {
    for (int k = 0; k < kOrders; ++k) c_[k] += o.c_[k];
    return *this;
  }
  H2Series& operator-=(const H2Series& o) {
    for (int k = 0; k < kOrders; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  H2Series& operator*=(Complex s) {
    for (auto& c : c_) c *= s;
    return *this;
  }

  friend H2Series operator+(H2Series a, const H2Series& b) { return a += b; }
  friend H2Series operator-(H2Series a, const H2Series& b) { return a -= b; }
  friend H2Series operator-(const H2Series& a) { return H2Series() - a; }
  friend H2Series operator*(H2Series a, Complex s) { return a *= s; }
  friend H2Series operator*(Complex s, H2Series a) { return a *= s; }
  friend H2Series operator*(H2Series a, double s) { return a *= Complex(s); }
  friend H2Series operator*(double s, H2Series a) { return a *= Complex(s); }

  friend H2Series operator*(const H2Series& a, const H2Series& b) {
    return {a.c_[0] * b.c_[0], a.c_[0] * b.c_[1] + a.c_[1] * b.c_[0],
            a.c_[0] * b.c_[2] + a.c_[1] * b.c_[1] + a.c_[2] * b.c_[0]};
  }

  friend bool operator==(const H2Series&, const H2Series&) = default;

 private:
  std::array<Complex, kOrders> c_{};
};

/// a * conj(b), truncated. The workhorse of density-matrix assembly.
inline H2Series times_conj(const H2Series& a, const H2Series& b) {
  return a * b.conj();
}

/// Matrix whose entries are H2Series, stored as one dense matrix per order.
class SeriesMatrix {
 public:
  using Index = Eigen::Index;

  SeriesMatrix() = default;
  SeriesMatrix(Index rows, Index cols);
  explicit SeriesMatrix(std::array<ComplexMatrix, 3> orders);

  static SeriesMatrix Zero(Index rows, Index cols) { return {rows, cols}; }
  static SeriesMatrix Identity(Index n);
  static SeriesMatrix Constant(const ComplexMatrix& m);

  Index rows() const { return orders_[0].rows(); }
  Index cols() const { return orders_[0].cols(); }

  const ComplexMatrix& order(int k) const { return orders_[k]; }
  ComplexMatrix& order(int k) { return orders_[k]; }

  H2Series operator()(Index i, Index j) const {
    return {orders_[0](i, j), orders_[1](i, j), orders_[2](i, j)};
  }
  void set(Index i, Index j, const H2Series& s);
  void add(Index i, Index j, const H2Series& s);

  SeriesMatrix adjoint() const;
  SeriesMatrix transpose() const;
  SeriesMatrix conjugate() const;
  SeriesMatrix block(Index i, Index j, Index rows, Index cols) const;

  /// Series for h -> -h: odd orders change sign.
  SeriesMatrix mirrored() const;

  ComplexMatrix evaluate(double h) const;

  /// Perturbative inverse about order(0), which must be invertible.
  SeriesMatrix inverse() const;

  /// Max |entry| of the given order.
  double max_abs(int k) const;

  SeriesMatrix& operator+=(const SeriesMatrix& o);
  SeriesMatrix& operator-=(const SeriesMatrix& o);
  SeriesMatrix& operator*=(Complex s);

  friend SeriesMatrix operator+(SeriesMatrix a, const SeriesMatrix& b) {
    return a += b;
  }
  friend SeriesMatrix operator-(SeriesMatrix a, const SeriesMatrix& b) {
    return a -= b;
  }
  friend SeriesMatrix operator-(const SeriesMatrix& a) {
    return SeriesMatrix(a.rows(), a.cols()) - a;
  }
  friend SeriesMatrix operator*(SeriesMatrix a, Complex s) { return a *= s; }
  friend SeriesMatrix operator*(Complex s, SeriesMatrix a) { return a *= s; }
  friend SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b);

 private:
  std::array<ComplexMatrix, 3> orders_;
};

}  // namespace cavent
