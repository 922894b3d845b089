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

#include "cavent/series.hpp"

#include <cmath>

#include "cavent/errors.hpp"

namespace cavent {

bool H2Series::is_finite() const {
  for (const auto& c : c_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

SeriesMatrix::SeriesMatrix(Index rows, Index cols) {
  for (auto& m : orders_) m = ComplexMatrix::Zero(rows, cols);
}

SeriesMatrix::SeriesMatrix(std::array<ComplexMatrix, 3> orders)
    : orders_(std::move(orders)) {
  for (int k = 1; k < 3; ++k) {
    if (orders_[k].rows() != orders_[0].rows() ||
        orders_[k].cols() != orders_[0].cols()) {
      throw ContractViolation("SeriesMatrix: order shapes differ");
    }
  }
}

SeriesMatrix SeriesMatrix::Identity(Index n) {
  SeriesMatrix m(n, n);
  m.orders_[0].setIdentity();
  return m;
}

SeriesMatrix SeriesMatrix::Constant(const ComplexMatrix& c) {
  SeriesMatrix m(c.rows(), c.cols());
  m.orders_[0] = c;
  return m;
}

void SeriesMatrix::set(Index i, Index j, const H2Series& s) {
  for (int k = 0; k < 3; ++k) orders_[k](i, j) = s[k];
}

void SeriesMatrix::add(Index i, Index j, const H2Series& s) {
  for (int k = 0; k < 3; ++k) orders_[k](i, j) += s[k];
}

SeriesMatrix SeriesMatrix::adjoint() const {
  return SeriesMatrix({orders_[0].adjoint(), orders_[1].adjoint(),
                       orders_[2].adjoint()});
}

SeriesMatrix SeriesMatrix::transpose() const {
  return SeriesMatrix({orders_[0].transpose(), orders_[1].transpose(),
                       orders_[2].transpose()});
}

SeriesMatrix SeriesMatrix::conjugate() const {
  return SeriesMatrix({orders_[0].conjugate(), orders_[1].conjugate(),
                       orders_[2].conjugate()});
}

SeriesMatrix SeriesMatrix::block(Index i, Index j, Index r, Index c) const {
  return SeriesMatrix({orders_[0].block(i, j, r, c), orders_[1].block(i, j, r, c),
                       orders_[2].block(i, j, r, c)});
}

SeriesMatrix SeriesMatrix::mirrored() const {
  return SeriesMatrix({orders_[0], -orders_[1], orders_[2]});
}

ComplexMatrix SeriesMatrix::evaluate(double h) const {
  return orders_[0] + h * (orders_[1] + h * orders_[2]);
}

SeriesMatrix SeriesMatrix::inverse() const {
  if (rows() != cols()) throw ContractViolation("inverse: matrix not square");
  Eigen::PartialPivLU<ComplexMatrix> lu(orders_[0]);
  if (std::abs(lu.determinant()) == 0.0) {
    throw ContractViolation("inverse: order-0 part is singular");
  }
  ComplexMatrix x0 = lu.inverse();
  ComplexMatrix x1 = -x0 * orders_[1] * x0;
  ComplexMatrix x2 = -x0 * (orders_[2] * x0 + orders_[1] * x1);
  return SeriesMatrix({std::move(x0), std::move(x1), std::move(x2)});
}

double SeriesMatrix::max_abs(int k) const {
  return orders_[k].size() == 0 ? 0.0 : orders_[k].cwiseAbs().maxCoeff();
}

SeriesMatrix& SeriesMatrix::operator+=(const SeriesMatrix& o) {
  for (int k = 0; k < 3; ++k) orders_[k] += o.orders_[k];
  return *this;
}

SeriesMatrix& SeriesMatrix::operator-=(const SeriesMatrix& o) {
  for (int k = 0; k < 3; ++k) orders_[k] -= o.orders_[k];
  return *this;
}

SeriesMatrix& SeriesMatrix::operator*=(Complex s) {
  for (auto& m : orders_) m *= s;
  return *this;
}

SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ContractViolation("SeriesMatrix product: inner dimensions differ");
  }
  const auto& A = a.orders_;
  const auto& B = b.orders_;
  return SeriesMatrix({A[0] * B[0], A[0] * B[1] + A[1] * B[0],
                       A[0] * B[2] + A[1] * B[1] + A[2] * B[0]});
}

}  // namespace cavent
