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

#include "cavent/building_blocks.hpp"

#include <cmath>
#include <cstdlib>
#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "cavent/errors.hpp"
#include "cavent/oracles.hpp"

namespace cavent {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr const char* kCacheMagic = "# cavent coefficient cache v1";

const char* convention_line() {
  return "# conventions: h-stripped orders 0..2; new_m = sum_n alpha_mn old_n + "
         "beta_mn conj(old_n); boson row n-1, fermion row kappa+n_max; "
         "composite Gauss-Legendre, 30 points per panel";
}

std::string ladder_line(int n_max) {
  std::ostringstream s;
  s << "# ladder: 0";
  for (double h : oracles::default_ladder(n_max)) s << ' ' << h;
  s << " (both signs)";
  return s.str();
}

struct CacheKey {
  Species species;
  int n_max;
  auto operator<=>(const CacheKey&) const = default;
};

std::mutex& memory_mutex() {
  static std::mutex m;
  return m;
}
std::map<CacheKey, std::vector<SeriesMatrix>>& memory_cache() {
  static std::map<CacheKey, std::vector<SeriesMatrix>> c;
  return c;
}

void write_cache(const std::filesystem::path& file, Species species, int n_max,
                 const std::vector<SeriesMatrix>& blocks,
                 const std::vector<std::string>& names) {
  std::error_code ec;
  std::filesystem::create_directories(file.parent_path(), ec);
  const auto tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return;  // cache is best effort
    out << kCacheMagic << '\n'
        << "# species: " << to_string(species) << '\n'
        << "# n_max: " << n_max << '\n'
        << ladder_line(n_max) << '\n'
        << "# fit residual bound: 2 C |h|^3 + 1e-11\n"
        << convention_line() << '\n'
        << "# columns: matrix order row col re im\n";
    out << std::setprecision(17);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      for (int k = 0; k < 3; ++k) {
        const auto& m = blocks[b].order(k);
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
          for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const Complex z = m(i, j);
            if (z == Complex()) continue;
            out << names[b] << ' ' << k << ' ' << i << ' ' << j << ' '
                << z.real() << ' ' << z.imag() << '\n';
          }
        }
      }
    }
  }
  std::filesystem::rename(tmp, file, ec);
}

std::optional<std::vector<SeriesMatrix>> read_cache(
    const std::filesystem::path& file, Species species, int n_max,
    const std::vector<std::string>& names, Eigen::Index dim) {
  std::ifstream in(file);
  if (!in) return std::nullopt;
  std::string line;
  if (!std::getline(in, line) || line != kCacheMagic) return std::nullopt;
  std::vector<SeriesMatrix> blocks(names.size(), SeriesMatrix(dim, dim));
  bool species_ok = false, n_ok = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line == std::string("# species: ") + to_string(species)) species_ok = true;
      if (line == "# n_max: " + std::to_string(n_max)) n_ok = true;
      continue;
    }
    std::istringstream row(line);
    std::string name;
    int k;
    Eigen::Index i, j;
    double re, im;
    if (!(row >> name >> k >> i >> j >> re >> im)) return std::nullopt;
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end() || k < 0 || k > 2 || i < 0 || j < 0 || i >= dim ||
        j >= dim) {
      return std::nullopt;
    }
    blocks[it - names.begin()].order(k)(i, j) = Complex(re, im);
  }
  if (!species_ok || !n_ok) return std::nullopt;
  return blocks;
}

// Looks up memory, then disk, then builds.
template <class Build>
std::vector<SeriesMatrix> cached(Species species, int n_max,
                                 const CacheOptions& cache,
                                 const std::vector<std::string>& names,
                                 Eigen::Index dim, Build build) {
  const CacheKey key{species, n_max};
  if (cache.memory && !cache.refresh) {
    std::lock_guard lock(memory_mutex());
    if (auto it = memory_cache().find(key); it != memory_cache().end()) {
      return it->second;
    }
  }
  std::optional<std::vector<SeriesMatrix>> blocks;
  std::filesystem::path file;
  if (cache.directory) {
    file = cache_file(*cache.directory, species, n_max);
    if (!cache.refresh) blocks = read_cache(file, species, n_max, names, dim);
  }
  if (!blocks) {
    blocks = build();
    if (cache.directory) write_cache(file, species, n_max, *blocks, names);
  }
  if (cache.memory) {
    std::lock_guard lock(memory_mutex());
    memory_cache().insert_or_assign(key, *blocks);
  }
  return *blocks;
}

// The frames coincide at h = 0: the oracle's order zero must be the
// identity up to quadrature noise, and is replaced by it exactly so that
// structural zeros stay zero downstream.
void snap_order_zero(SeriesMatrix& m, bool identity) {
  const auto n = m.rows();
  ComplexMatrix exact = ComplexMatrix::Zero(n, m.cols());
  if (identity) exact.setIdentity();
  const double dev = (m.order(0) - exact).cwiseAbs().maxCoeff();
  if (dev > 1e-12) {
    throw DiagnosticError("building block: order zero is not the identity", dev);
  }
  m.order(0) = exact;
}

std::vector<SeriesMatrix> build_boson(int n_max) {
  const auto rule = oracles::QuadratureRule::composite(oracles::default_panels(n_max));
  std::vector<oracles::OrderSample> samples;
  auto ladder = oracles::symmetric_ladder(oracles::default_ladder(n_max));
  ladder.push_back(0.0);
  for (double h : ladder) {
    const auto o = oracles::boson_overlap(h, n_max, rule);
    ComplexMatrix joint(n_max, 2 * n_max);
    joint << o.alpha.cast<Complex>(), o.beta.cast<Complex>();
    samples.push_back({h, std::move(joint)});
  }
  const auto fit = oracles::extract_orders(samples);
  auto alpha = fit.series.block(0, 0, n_max, n_max);
  auto beta = fit.series.block(0, n_max, n_max, n_max);
  snap_order_zero(alpha, true);
  snap_order_zero(beta, false);
  return {alpha, beta};
}

std::vector<SeriesMatrix> build_fermion(int n_max) {
  const auto rule = oracles::QuadratureRule::composite(oracles::default_panels(n_max));
  std::vector<oracles::OrderSample> samples;
  auto ladder = oracles::symmetric_ladder(oracles::default_ladder(n_max));
  ladder.push_back(0.0);
  for (double h : ladder) {
    samples.push_back({h, oracles::fermion_overlap(h, n_max, rule).cast<Complex>()});
  }
  auto A = oracles::extract_orders(samples).series;
  snap_order_zero(A, true);
  return {A};
}

}  // namespace

double CavityGeometry::rindler_width() const { return 2.0 * std::atanh(0.5 * h); }

void CavityGeometry::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ContractViolation("cavity length must be positive");
  }
  if (!(h > 0.0 && h < 2.0)) {
    throw ContractViolation("h must lie in (0, 2)");
  }
}

TravelScenario TravelScenario::single_segment(double h, double u) {
  return {CavityGeometry{1.0, h}, {Segment::accelerated(u)}, 1};
}

void TravelScenario::validate() const {
  geometry.validate();
  if (repetitions < 1) throw ContractViolation("repetitions must be >= 1");
  for (const auto& s : segments) {
    if (!(s.duration >= 0.0) || !std::isfinite(s.duration)) {
      throw ContractViolation("segment durations must be finite and >= 0");
    }
    if (s.sign != 1 && s.sign != -1) {
      throw ContractViolation("segment sign must be +1 or -1");
    }
  }
}

CacheOptions CacheOptions::from_environment() {
  CacheOptions c;
  if (const char* dir = std::getenv("CAVENT_CACHE_DIR"); dir && *dir) {
    c.directory = std::filesystem::path(dir);
  }
  return c;
}

std::filesystem::path cache_file(const std::filesystem::path& directory,
                                 Species species, int n_max) {
  return directory /
         (std::string(to_string(species)) + "-nmax" + std::to_string(n_max) + ".txt");
}

BosonBogoliubov boson_building_block(const CavityGeometry& geometry, int n_max,
                                     const CacheOptions& cache) {
  geometry.validate();
  if (n_max < 1) throw ContractViolation("n_max must be >= 1");
  auto blocks = cached(Species::boson, n_max, cache, {"alpha", "beta"}, n_max,
                       [&] { return build_boson(n_max); });
  BosonBogoliubov b{std::move(blocks[0]), std::move(blocks[1])};
  b.validate();
  return b;
}

FermionBogoliubov fermion_building_block(const CavityGeometry& geometry,
                                         int n_max, double s,
                                         const CacheOptions& cache) {
  geometry.validate();
  if (s != 0.0) throw ContractViolation("only the s = 0 boundary condition is supported");
  if (n_max < 0) throw ContractViolation("n_max must be >= 0");
  auto blocks = cached(Species::fermion, n_max, cache, {"A"}, 2 * n_max + 1,
                       [&] { return build_fermion(n_max); });
  FermionBogoliubov f{n_max, std::move(blocks[0])};
  f.validate();
  return f;
}

Bogoliubov phase_segment(Species species, const Segment& segment, int n_max) {
  if (!(segment.duration >= 0.0)) throw ContractViolation("negative duration");
  // Phase per unit of mode frequency number.
  const double rate = segment.kind == SegmentKind::accelerated
                          ? kTwoPi * segment.duration
                          : segment.duration;
  if (species == Species::boson) {
    ComplexVector g(n_max);
    for (int n = 1; n <= n_max; ++n) g(n - 1) = std::polar(1.0, -rate * n);
    return diagonal_boson(g);
  }
  ComplexVector g(2 * n_max + 1);
  for (int k = -n_max; k <= n_max; ++k) {
    g(k + n_max) = std::polar(1.0, -rate * (k + 0.5));
  }
  return diagonal_fermion(g);
}

Bogoliubov assemble(Species species, const TravelScenario& scenario, int n_max,
                    const CacheOptions& cache) {
  scenario.validate();
  Bogoliubov junction = species == Species::boson
      ? Bogoliubov(boson_building_block(scenario.geometry, n_max, cache))
      : Bogoliubov(fermion_building_block(scenario.geometry, n_max, 0.0, cache));
  Bogoliubov mirrored = std::visit(
      [](auto b) -> Bogoliubov {
        if constexpr (std::is_same_v<decltype(b), BosonBogoliubov>) {
          b.alpha = b.alpha.mirrored();
          b.beta = b.beta.mirrored();
        } else {
          b.A = b.A.mirrored();
        }
        return b;
      },
      junction);

  Bogoliubov total = species == Species::boson
      ? Bogoliubov(BosonBogoliubov::identity(n_max))
      : Bogoliubov(FermionBogoliubov::identity(n_max));
  for (int r = 0; r < scenario.repetitions; ++r) {
    for (const auto& seg : scenario.segments) {
      const auto phase = phase_segment(species, seg, n_max);
      if (seg.kind == SegmentKind::inertial) {
        total = compose(phase, total);
        continue;
      }
      const auto& j = seg.sign > 0 ? junction : mirrored;
      total = compose(invert(j), compose(phase, compose(j, total)));
    }
  }
  return total;
}

Bogoliubov rephase_out(const Bogoliubov& b, const std::vector<double>& angles) {
  return std::visit(
      [&](const auto& x) -> Bogoliubov {
        using T = std::decay_t<decltype(x)>;
        std::size_t size = 0;
        if constexpr (std::is_same_v<T, BosonBogoliubov>) {
          size = static_cast<std::size_t>(x.alpha.rows());
        } else {
          size = static_cast<std::size_t>(x.A.rows());
        }
        if (angles.size() != size) {
          throw ContractViolation("rephase_out: one angle per mode expected");
        }
        ComplexVector g(size);
        for (std::size_t i = 0; i < size; ++i) g(i) = std::polar(1.0, angles[i]);
        if constexpr (std::is_same_v<T, BosonBogoliubov>) {
          return compose(diagonal_boson(g), x);
        } else {
          return compose(diagonal_fermion(g), x);
        }
      },
      b);
}

}  // namespace cavent
