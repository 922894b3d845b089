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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cavent/bogoliubov.hpp"

namespace cavent {

/// Rigid cavity of proper length delta. h / delta is the proper
/// acceleration at the centre; the walls sit at a = delta (1/h - 1/2) and
/// b = delta (1/h + 1/2) in the accelerated frame.
struct CavityGeometry {
  double delta = 1.0;
  double h = 0.0;

  double inner_wall() const { return delta * (1.0 / h - 0.5); }
  double outer_wall() const { return delta * (1.0 / h + 0.5); }
  /// ln(b/a) = 2 atanh(h/2).
  double rindler_width() const;

  /// Throws ContractViolation unless delta > 0 and 0 < h < 2.
  void validate() const;
};

enum class SegmentKind { inertial, accelerated };

/// One piece of the worldtube. Accelerated segments carry their duration
/// as u = h tau / (4 delta atanh(h/2)); inertial ones as theta = pi tau / delta.
struct Segment {
  SegmentKind kind = SegmentKind::inertial;
  double duration = 0.0;
  int sign = 1;

  static Segment inertial(double theta) { return {SegmentKind::inertial, theta, 1}; }
  static Segment accelerated(double u, int sign = 1) {
    return {SegmentKind::accelerated, u, sign};
  }
};

struct TravelScenario {
  CavityGeometry geometry;
  std::vector<Segment> segments;
  int repetitions = 1;

  /// A single accelerated segment of duration u between inertial regions.
  static TravelScenario single_segment(double h, double u);

  void validate() const;
};

/// Where and whether per-order coefficients are cached on disk. The default
/// reads CAVENT_CACHE_DIR; an empty directory disables the disk cache.
struct CacheOptions {
  std::optional<std::filesystem::path> directory;
  bool memory = true;
  /// Ignore existing cache entries and rebuild (then store).
  bool refresh = false;

  static CacheOptions from_environment();
};

/// Junction from the inertial cavity to the uniformly accelerated one,
/// expanded to O(h^2). The coefficients do not depend on geometry.h, which
/// only has to be valid.
BosonBogoliubov boson_building_block(const CavityGeometry& geometry, int n_max,
                                     const CacheOptions& cache = CacheOptions::from_environment());

/// Dirac field with bag walls. Only s = 0 is supported.
FermionBogoliubov fermion_building_block(const CavityGeometry& geometry, int n_max,
                                         double s = 0.0,
                                         const CacheOptions& cache = CacheOptions::from_environment());

/// Path of the cache file for a given species and truncation.
std::filesystem::path cache_file(const std::filesystem::path& directory,
                                 Species species, int n_max);

/// Free evolution, exact in h. Accelerated: mode n picks up
/// exp(-2 pi i n u) (exp(-2 pi i (kappa + 1/2) u) for fermions). Inertial:
/// exp(-i n theta) (exp(-i (kappa + 1/2) theta)).
Bogoliubov phase_segment(Species species, const Segment& segment, int n_max);

/// Folds junction^-1 phase junction over the segments, left to right, and
/// over the repetitions.
Bogoliubov assemble(Species species, const TravelScenario& scenario, int n_max,
                    const CacheOptions& cache = CacheOptions::from_environment());

/// Redefines the out-mode phases: G_j -> exp(i angles_j) G_j.
Bogoliubov rephase_out(const Bogoliubov& b, const std::vector<double>& angles);

}  // namespace cavent
