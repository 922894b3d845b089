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

#include "cavent/building_blocks.hpp"
#include "cavent/errors.hpp"
#include "cavent/negativity.hpp"

using namespace cavent;

namespace {

// Two qubits, basis index 2 n_a + n_b.
ReducedDensityMatrix qubits(const SeriesMatrix& rho) {
  ReducedDensityMatrix r;
  r.species = Species::fermion;
  r.mode_a = 0;
  r.mode_b = -1;
  r.cap = 1;
  r.rho = rho;
  return r;
}

// |psi> = sqrt(1 - h^2 c^2)|00> + h c |11>, to O(h^2).
SeriesMatrix weak_pair(double c) {
  SeriesMatrix m(4, 4);
  m.set(0, 0, H2Series(1.0, 0.0, -c * c));
  m.set(0, 3, H2Series(0.0, c, 0.0));
  m.set(3, 0, H2Series(0.0, c, 0.0));
  m.set(3, 3, H2Series(0.0, 0.0, c * c));
  return m;
}

Bogoliubov at(Species s, double u, int n_max = 40) {
  return assemble(s, TravelScenario::single_segment(0.01, u), n_max);
}

}  // namespace

TEST_SUITE("negativity") {

TEST_CASE("Bell state") {
  ComplexMatrix bell = ComplexMatrix::Zero(4, 4);
  bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
  const auto pt = partial_transpose(qubits(SeriesMatrix::Constant(bell)));
  CHECK(negativity_numeric(pt, 0.0) == doctest::Approx(0.5));
  const auto eig = pt_eigenvalues(pt, 0.0);
  CHECK(eig(0) == doctest::Approx(-0.5));
}

TEST_CASE("product states are not entangled") {
  ComplexMatrix prod = ComplexMatrix::Zero(4, 4);
  prod(0, 0) = 0.7;
  prod(1, 1) = 0.3;
  prod(0, 1) = prod(1, 0) = 0.2;
  const auto pt = partial_transpose(qubits(SeriesMatrix::Constant(prod)));
  CHECK(negativity_numeric(pt, 0.0) == 0.0);
  CHECK(leading_order(pt).zero);
}

TEST_CASE("first-order pair amplitude") {
  const auto pt = partial_transpose(qubits(weak_pair(0.3)));
  const auto lo = leading_order(pt);
  CHECK_FALSE(lo.zero);
  CHECK(lo.power == 1);
  CHECK(lo.coefficient == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(lo.extrapolated == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(lo.slope == doctest::Approx(1.0).epsilon(0.01));
  CHECK(perturbative_coefficients(pt)[0] == doctest::Approx(0.3));
}

TEST_CASE("non-Hermitian input is rejected") {
  ComplexMatrix m = ComplexMatrix::Identity(4, 4) * 0.25;
  m(0, 1) = 0.1;
  CHECK_THROWS_AS(pt_eigenvalues(SeriesMatrix::Constant(m), 0.0), ContractViolation);
}

TEST_CASE("pair case rules") {
  CHECK_THROWS_AS((PairCase{Species::boson, InStateKind::pair, 1, 2}.validate(40)), ContractViolation);
  CHECK_THROWS_AS((PairCase{Species::boson, InStateKind::vacuum, 0, 2}.validate(40)), ContractViolation);
  CHECK_THROWS_AS((PairCase{Species::fermion, InStateKind::pair, 1, 2}.validate(40)), ContractViolation);
  CHECK_THROWS_AS((PairCase{Species::fermion, InStateKind::one_particle, -1, 2}.validate(40)),
                  ContractViolation);
  CHECK_THROWS_AS((PairCase{Species::fermion, InStateKind::vacuum, 1, 41}.validate(40)),
                  ContractViolation);
  CHECK_NOTHROW((PairCase{Species::fermion, InStateKind::one_particle, 1, -2}.validate(40)));
}

TEST_CASE("first-order sums") {
  const auto t = at(Species::boson, 0.3);
  const LeadingOrderSums sums(std::get<BosonBogoliubov>(t));
  CHECK(sums.f_beta(1) > 0.0);
  CHECK(sums.f_beta(1, 4) <= sums.f_beta(1));
  const auto& b = std::get<BosonBogoliubov>(t);
  CHECK(sums.f_beta(1) - sums.f_beta(1, 4) ==
        doctest::Approx(0.5 * std::norm(b.beta.order(1)(3, 0))));
  const auto tf = at(Species::fermion, 0.3);
  const LeadingOrderSums fs(std::get<FermionBogoliubov>(tf));
  CHECK(fs.f_A(1) >= fs.f_A(1, 4));
  CHECK(fs.fbar_A(1) >= 0.0);
}

TEST_CASE("closed forms track the numeric spectrum") {
  const auto t = at(Species::boson, 0.3);
  const PairCase c{Species::boson, InStateKind::vacuum, 1, 4};
  const auto rep = analyze(t, c);
  REQUIRE(rep.closed_form.size() == 2u);
  const auto cf = closed_form_negativity(rep.closed_form);
  REQUIRE(cf);
  CHECK(*cf == doctest::Approx(rep.negativity).epsilon(1e-6));
  CHECK(rep.leading.power == 1);
  CHECK(rep.trace_defect < 1e-8);
}

TEST_CASE("no closed form for same-parity one-particle bosons") {
  const auto t = at(Species::boson, 0.3);
  CHECK(closed_form_eigenvalues(t, {Species::boson, InStateKind::one_particle, 1, 3}, 0.01).empty());
  CHECK_FALSE(closed_form_negativity({}).has_value());
}

TEST_CASE("same-parity pairs start at second order") {
  const auto t = at(Species::boson, 0.3);
  const auto rep = analyze(t, {Species::boson, InStateKind::vacuum, 1, 3});
  CHECK(rep.leading.power == 2);
  CHECK(rep.leading.slope == doctest::Approx(2.0).epsilon(0.02));
  const auto tf = at(Species::fermion, 0.3);
  CHECK(analyze(tf, {Species::fermion, InStateKind::vacuum, 1, -1}).leading.power == 2);
}

TEST_CASE("Pauli blocking") {
  const auto t = at(Species::fermion, 0.3);
  const auto rep = analyze(t, {Species::fermion, InStateKind::one_particle, 1, -2});
  CHECK(rep.leading.zero);
  CHECK(rep.negativity < 1e-12);
}

}  // TEST_SUITE
