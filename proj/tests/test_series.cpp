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

#include <doctest.h>

#include "cavent/errors.hpp"
#include "cavent/series.hpp"

using namespace cavent;

TEST_SUITE("series") {

TEST_CASE("scalar products truncate at second order") {
  const H2Series a{1.0, 1.0, 0.0};
  const auto sq = a * a;
  CHECK(sq[0] == Complex(1.0));
  CHECK(sq[1] == Complex(2.0));
  CHECK(sq[2] == Complex(1.0));
  const auto cube = sq * a;
  CHECK(cube[2] == Complex(3.0));  // the h^3 term is dropped
}

TEST_CASE("leading order and zero test") {
  CHECK(H2Series().is_zero());
  CHECK(H2Series(0.0, 0.0, 2.0).leading_order() == 2);
  CHECK(H2Series(0.0, Complex(0.0, 1.0)).leading_order() == 1);
  const H2Series z{Complex(1, 2), Complex(3, -4), Complex(0, 1)};
  CHECK(times_conj(z, z)[0] == Complex(5.0));
}

TEST_CASE("matrix product matches numeric product to O(h^3)") {
  std::srand(3);
  std::array<ComplexMatrix, 3> pa, pb;
  for (int k = 0; k < 3; ++k) {
    pa[k] = ComplexMatrix::Random(5, 5);
    pb[k] = ComplexMatrix::Random(5, 5);
  }
  const SeriesMatrix a(pa), b(pb);
  const auto ab = a * b;
  for (double h : {1e-2, 5e-3}) {
    const double err = (ab.evaluate(h) - a.evaluate(h) * b.evaluate(h)).cwiseAbs().maxCoeff();
    CHECK(err < 50.0 * h * h * h);
  }
}

TEST_CASE("inverse") {
  std::srand(5);
  std::array<ComplexMatrix, 3> p;
  p[0] = ComplexMatrix::Identity(6, 6) + 0.1 * ComplexMatrix::Random(6, 6);
  p[1] = ComplexMatrix::Random(6, 6);
  p[2] = ComplexMatrix::Random(6, 6);
  const SeriesMatrix m(p);
  const auto prod = m * m.inverse();
  CHECK((prod.order(0) - ComplexMatrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(prod.max_abs(1) < 1e-12);
  CHECK(prod.max_abs(2) < 1e-12);
}

TEST_CASE("mirroring flips odd orders") {
  std::array<ComplexMatrix, 3> p;
  for (auto& o : p) o = ComplexMatrix::Random(3, 3);
  const SeriesMatrix m(p);
  const auto r = m.mirrored();
  CHECK(r.order(0) == m.order(0));
  CHECK(r.order(1) == -m.order(1));
  CHECK(r.order(2) == m.order(2));
  CHECK((r.evaluate(0.1) - m.evaluate(-0.1)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("adjoint, transpose and blocks") {
  std::array<ComplexMatrix, 3> p;
  for (auto& o : p) o = ComplexMatrix::Random(4, 3);
  const SeriesMatrix m(p);
  CHECK(m.adjoint()(2, 1) == m(1, 2).conj());
  CHECK(m.transpose()(2, 1) == m(1, 2));
  CHECK(m.block(1, 1, 2, 2)(0, 0) == m(1, 1));
  SeriesMatrix z(2, 2);
  z.add(0, 1, H2Series(1.0, 2.0, 3.0));
  z.add(0, 1, H2Series(1.0));
  CHECK(z(0, 1) == H2Series(2.0, 2.0, 3.0));
}

}  // TEST_SUITE
