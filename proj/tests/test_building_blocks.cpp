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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "cavent/building_blocks.hpp"
#include "cavent/errors.hpp"

using namespace cavent;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const char* name) {
  const auto dir = fs::temp_directory_path() / ("cavent-test-" + std::string(name) + "-" +
                                                std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("building_blocks") {

TEST_CASE("geometry") {
  const CavityGeometry g{2.0, 0.1};
  CHECK(g.outer_wall() - g.inner_wall() == doctest::Approx(2.0));
  CHECK(g.rindler_width() == doctest::Approx(std::log(g.outer_wall() / g.inner_wall())));
  CHECK_THROWS_AS((CavityGeometry{1.0, 0.0}.validate()), ContractViolation);
  CHECK_THROWS_AS((CavityGeometry{1.0, 2.0}.validate()), ContractViolation);
  CHECK_THROWS_AS((CavityGeometry{-1.0, 0.1}.validate()), ContractViolation);
}

TEST_CASE("only the s = 0 bag condition") {
  CHECK_THROWS_AS(fermion_building_block({1.0, 0.01}, 4, 0.5, CacheOptions{}),
                  ContractViolation);
}

TEST_CASE("cache file round trip") {
  const auto dir = scratch_dir("cache");
  CacheOptions write;
  write.directory = dir;
  write.memory = false;
  const CavityGeometry g{1.0, 0.01};
  const auto built = boson_building_block(g, 10, write);
  const auto file = cache_file(dir, Species::boson, 10);
  REQUIRE(fs::exists(file));
  std::ifstream in(file);
  std::string magic;
  std::getline(in, magic);
  CHECK(magic == "# cavent coefficient cache v1");

  const auto loaded = boson_building_block(g, 10, write);
  for (int k = 0; k < 3; ++k) {
    CHECK(loaded.alpha.order(k) == built.alpha.order(k));
    CHECK(loaded.beta.order(k) == built.beta.order(k));
  }

  // A damaged file is rebuilt rather than trusted.
  { std::ofstream(file) << "# cavent coefficient cache v1\nalpha 0 0 0 nonsense\n"; }
  const auto rebuilt = boson_building_block(g, 10, write);
  CHECK(rebuilt.beta.order(1) == built.beta.order(1));
  fs::remove_all(dir);
}

TEST_CASE("cache directory from the environment") {
  const auto dir = scratch_dir("env");
  ::setenv("CAVENT_CACHE_DIR", dir.c_str(), 1);
  const auto opts = CacheOptions::from_environment();
  REQUIRE(opts.directory);
  CHECK(*opts.directory == dir);
  ::setenv("CAVENT_CACHE_DIR", "", 1);
  CHECK_FALSE(CacheOptions::from_environment().directory);
  ::unsetenv("CAVENT_CACHE_DIR");
  fs::remove_all(dir);
}

TEST_CASE("the scenario returns to the identity at integer u") {
  // Compared on the interior modes; near the cut-off the truncated second
  // order does not invert exactly.
  const int w = 10;
  for (auto s : {Species::boson, Species::fermion}) {
    for (double u : {0.0, 1.0, 2.0}) {
      const auto t = assemble(s, TravelScenario::single_segment(0.01, u), 40);
      // Half-integer fermion frequencies: a full period flips the overall sign.
      auto fid = FermionBogoliubov::identity(40);
      if (u == 1.0) fid.A.order(0) *= -1.0;
      const auto id = s == Species::boson ? Bogoliubov(BosonBogoliubov::identity(40)) : Bogoliubov(fid);
      const auto diff = [&](const auto& a) {
        double d = 0.0;
        using T = std::decay_t<decltype(a)>;
        const auto& b = std::get<T>(id);
        if constexpr (std::is_same_v<T, BosonBogoliubov>) {
          for (int k = 0; k < 3; ++k) {
            d = std::max(d, (a.alpha.order(k) - b.alpha.order(k)).topLeftCorner(w, w).cwiseAbs().maxCoeff());
            d = std::max(d, a.beta.order(k).topLeftCorner(w, w).cwiseAbs().maxCoeff());
          }
        } else {
          for (int k = 0; k < 3; ++k) {
            d = std::max(d, (a.A.order(k) - b.A.order(k)).block(40 - w, 40 - w, 2 * w + 1, 2 * w + 1).cwiseAbs().maxCoeff());
          }
        }
        return d;
      };
      CHECK(std::visit(diff, t) < 1e-6);
    }
  }
}

TEST_CASE("phase segments") {
  const auto p = std::get<BosonBogoliubov>(phase_segment(Species::boson, Segment::accelerated(0.25), 4));
  CHECK(std::abs(p.alpha.order(0)(1, 1) - Complex(-1.0, 0.0)) < 1e-15);  // exp(-i pi)
  const auto f = std::get<FermionBogoliubov>(phase_segment(Species::fermion, Segment::inertial(M_PI), 2));
  CHECK(std::abs(f.A.order(0)(f.index(0), f.index(0)) - Complex(0.0, -1.0)) < 1e-15);
}

TEST_CASE("zero-duration segments of either sign are trivial") {
  TravelScenario there_and_back{{1.0, 0.01},
                                {Segment::accelerated(0.0, 1), Segment::accelerated(0.0, -1)},
                                1};
  const auto t = std::get<BosonBogoliubov>(assemble(Species::boson, there_and_back, 10));
  CHECK(t.beta.max_abs(1) < 1e-12);
  CHECK_THROWS_AS((TravelScenario{{1.0, 0.01}, {Segment{SegmentKind::inertial, 1.0, 3}}, 1}.validate()),
                  ContractViolation);
}

TEST_CASE("rephasing the out modes") {
  const auto t = assemble(Species::boson, TravelScenario::single_segment(0.01, 0.3), 6);
  std::vector<double> angles(6, 0.0);
  angles[2] = 1.0;
  const auto r = std::get<BosonBogoliubov>(rephase_out(t, angles));
  const auto& b = std::get<BosonBogoliubov>(t);
  CHECK(std::abs(r.beta.order(1)(2, 0) - std::polar(1.0, 1.0) * b.beta.order(1)(2, 0)) < 1e-15);
  CHECK_THROWS_AS(rephase_out(t, {0.0}), ContractViolation);
}

}  // TEST_SUITE
