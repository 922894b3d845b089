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

#include <cmath>

#include "cavent/building_blocks.hpp"
#include "cavent/errors.hpp"
#include "cavent/oracles.hpp"

using namespace cavent;
using namespace cavent::oracles;

TEST_SUITE("oracles") {

TEST_CASE("composite quadrature") {
  const auto rule = QuadratureRule::composite(4);
  CHECK(rule.size() == 4u * 30u);
  double poly = 0.0, wave = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    poly += rule.weights[i] * std::pow(rule.nodes[i], 9);
    wave += rule.weights[i] * std::sin(25.0 * rule.nodes[i]);
  }
  CHECK(poly == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(wave == doctest::Approx((1.0 - std::cos(25.0)) / 25.0).epsilon(1e-13));
  CHECK(default_panels(40) >= 80);
}

TEST_CASE("order extraction recovers a polynomial") {
  ComplexMatrix c0(1, 2), c1(1, 2), c2(1, 2), c3(1, 2);
  c0 << 1.0, 0.0;
  c1 << 0.5, Complex(0, 2);
  c2 << -3.0, 1.0;
  c3 << 7.0, -2.0;
  std::vector<OrderSample> samples;
  auto ladder = symmetric_ladder(default_ladder(40));
  CHECK(ladder.size() == 8u);
  ladder.push_back(0.0);
  for (double h : ladder) samples.push_back({h, ComplexMatrix(c0 + h * c1 + h * h * c2 + h * h * h * c3)});
  const auto fit = extract_orders(samples);
  CHECK((fit.series.order(0) - c0).cwiseAbs().maxCoeff() == 0.0);
  CHECK((fit.series.order(1) - c1).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((fit.series.order(2) - c2).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("ladder scales with the truncation") {
  CHECK(default_ladder(40).front() == doctest::Approx(0.08));
  CHECK(default_ladder(80).front() == doctest::Approx(0.04));
  CHECK(default_ladder(80).back() == doctest::Approx(0.005));
}

TEST_CASE("frozen junction coefficients") {
  CacheOptions memory;
  const CavityGeometry g{1.0, 0.01};
  const auto b = boson_building_block(g, 40, memory);
  CHECK(b.beta.order(1)(0, 3).real() == doctest::Approx(0.003242277876560).epsilon(1e-9));
  CHECK(b.alpha.order(2)(0, 0).real() == doctest::Approx(-0.0411233516753).epsilon(1e-9));
  const auto f = fermion_building_block(g, 40, 0.0, memory);
  auto A1 = [&](int m, int n) { return f.A.order(1)(f.index(m), f.index(n)).real(); };
  CHECK(A1(2, -1) == doctest::Approx(-0.0075052728624).epsilon(1e-9));
  CHECK(A1(1, 4) == doctest::Approx(0.0225158185872).epsilon(1e-9));
  CHECK(A1(1, 2) == doctest::Approx(0.405284734569).epsilon(1e-9));
}

TEST_CASE("junction slice reduces to the inertial slice at h = 0") {
  const JunctionSlice flat{0.0};
  const JunctionSlice bent{0.05};
  for (double s : {0.0, 0.3, 1.0}) {
    CHECK(flat.rindler_fraction(s) == doctest::Approx(s));
    CHECK(bent.rindler_fraction(s) == doctest::Approx(s).epsilon(0.05));
  }
}

TEST_CASE("bosonic Fock space") {
  const auto space = FockSpace::bosonic({1, 2}, 2, 3);
  // Occupations (n1, n2) with n1, n2 <= 2 and n1 + n2 <= 3: 8 states.
  CHECK(space.dimension() == 8u);
  const auto a1 = space.annihilator(0);
  const auto two = space.find({2, 0});
  const auto one = space.find({1, 0});
  REQUIRE(two >= 0);
  REQUIRE(one >= 0);
  CHECK(std::abs(a1.coeff(one, two) - std::sqrt(2.0)) < 1e-15);
  CHECK(space.find({3, 0}) == -1);
}

TEST_CASE("fermionic anticommutators") {
  const auto space = FockSpace::fermionic({-1, 0, 2}, 3);
  CHECK(space.dimension() == 8u);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const auto a = space.annihilator(i);
      const auto b = space.annihilator(j);
      const ComplexMatrix ac = ComplexMatrix(a * ComplexMatrix(b.adjoint())) +
                               ComplexMatrix(b.adjoint() * ComplexMatrix(a));
      ComplexMatrix expected = ComplexMatrix::Zero(8, 8);
      if (i == j) expected.setIdentity();
      CHECK((ac - expected).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
}

TEST_CASE("trivial transformation leaves the vacuum empty") {
  const auto space = FockSpace::bosonic({1, 2, 3}, 2, 4);
  const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
  const auto vac = fock_vacuum(space, id, ComplexMatrix::Zero(3, 3));
  CHECK(std::abs(std::abs(vac.amplitude(space, {0, 0, 0})) - 1.0) < 1e-12);
  CHECK(vac.residual < 1e-20);
  const auto one = fock_apply_instate(space, vac, id, ComplexMatrix::Zero(3, 3), 2);
  CHECK(std::abs(std::abs(one.amplitude(space, {0, 1, 0})) - 1.0) < 1e-12);
}

TEST_CASE("boson overlap satisfies the identities at finite h") {
  const auto rule = QuadratureRule::composite(default_panels(24));
  const auto o = boson_overlap(0.05, 24, rule);
  CHECK(identity_check(o.alpha.cast<Complex>(), o.beta.cast<Complex>(), 8).max() < 1e-8);
}

}  // TEST_SUITE
