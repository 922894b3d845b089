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

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "cavent/errors.hpp"
#include "cavent/oracles.hpp"
#include "cavent/scenarios.hpp"

namespace cavent {

namespace {

class Log {
 public:
  explicit Log(std::ostream& out) : out_(out) {}

  void record(bool ok, const std::string& name, double value, double bound) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " %.3e (bound %.1e)", value, bound);
    out_ << (ok ? "PASS " : "FAIL ") << name << buf << "\n";
    out_.flush();
    all_ok_ = all_ok_ && ok;
  }
  void below(const std::string& name, double value, double bound) {
    record(value < bound, name, value, bound);
  }
  void note(const std::string& text) { out_ << "     " << text << "\n"; }
  bool ok() const { return all_ok_; }

 private:
  std::ostream& out_;
  bool all_ok_ = true;
};

double curve_value(const PairCase& c, double u, int n_max, const CacheOptions& cache,
                   int power) {
  const auto t = assemble(c.species, TravelScenario::single_segment(0.01, u), n_max, cache);
  return evaluate_point(t, c, u, 0.01, {}, power).value;
}

}  // namespace

bool run_checks(int n_max, std::ostream& out, const CacheOptions& cache) {
  Log log(out);
  const int w = n_max / 2;

  // Finite-h overlaps straight from the quadrature.
  const auto rule = oracles::QuadratureRule::composite(oracles::default_panels(n_max));
  for (double h : {0.08, 0.04, 0.02, 0.01}) {
    const auto b = oracles::boson_overlap(h, n_max, rule);
    const auto rb = identity_check(b.alpha.cast<Complex>(), b.beta.cast<Complex>(), w);
    log.below("identity boson h=" + std::to_string(h), rb.max(), 1e-8);
    const ComplexMatrix a = oracles::fermion_overlap(h, n_max, rule).cast<Complex>();
    log.below("identity fermion h=" + std::to_string(h), identity_check(a, n_max, w).max(), 1e-8);
  }

  // Series coefficients. Order 2 is limited by the mode truncation and is
  // only reported.
  const CavityGeometry geom{1.0, 0.01};
  const auto bb = boson_building_block(geom, n_max, cache);
  const auto fb = fermion_building_block(geom, n_max, 0.0, cache);
  for (const auto& [name, r] : {std::pair{"boson", identity_check(bb)},
                                std::pair{"fermion", identity_check(fb)}}) {
    for (int k = 0; k < 2; ++k) {
      log.below(std::string("series identity ") + name + " order " + std::to_string(k),
                std::max(r.normalization[k], r.symmetry[k]), 1e-8);
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "series identity %s order 2: %.3e (truncation)", name,
                  std::max(r.normalization[2], r.symmetry[2]));
    log.note(buf);
  }

  // Periodicity and vanishing at u = 0, 1 on the preset curves.
  for (const auto& name : preset_names()) {
    const auto req = preset(name);
    for (const auto& c : req.curves) {
      double worst = 0.0;
      for (double u : {0.13, 0.37, 0.71}) {
        worst = std::max(worst, std::abs(curve_value(c.pair, u, n_max, cache, c.power) -
                                         curve_value(c.pair, u + 1.0, n_max, cache, c.power)));
      }
      log.below("period " + c.id, worst, 1e-8);
      if (c.pair.species == Species::boson) {
        log.below("zero at u=0,1 " + c.id,
                  std::max(std::abs(curve_value(c.pair, 0.0, n_max, cache, c.power)),
                           std::abs(curve_value(c.pair, 1.0, n_max, cache, c.power))),
                  1e-8);
      }
    }
  }

  // Convention invariance: out-mode phases and the fermionic ordering.
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  for (const auto& c : preset("fig1a").curves) {
    const auto t = assemble(c.pair.species, TravelScenario::single_segment(0.01, 0.3), n_max, cache);
    const std::size_t size = c.pair.species == Species::boson ? n_max : 2 * n_max + 1;
    std::vector<double> angles(size);
    for (auto& a : angles) a = angle(rng);
    AnalysisOptions opts;
    opts.closed_forms = false;
    const double base = analyze(t, c.pair, opts).negativity;
    const double phased = analyze(rephase_out(t, angles), c.pair, opts).negativity;
    log.below("rephasing " + c.id, std::abs(phased - base), 1e-10);
    if (c.pair.species == Species::fermion) {
      opts.ordering = FermionOrdering::descending;
      log.below("ordering " + c.id, std::abs(analyze(t, c.pair, opts).negativity - base), 1e-10);
    }
  }

  // Closed forms against the numeric partial transpose.
  const std::vector<PairCase> closed = {
      {Species::boson, InStateKind::vacuum, 1, 4},
      {Species::boson, InStateKind::one_particle, 1, 4},
      {Species::fermion, InStateKind::vacuum, 2, -1},
      {Species::fermion, InStateKind::one_particle, 1, 4},
      {Species::fermion, InStateKind::pair, 2, -1},
  };
  for (const auto& c : closed) {
    const auto t = assemble(c.species, TravelScenario::single_segment(0.01, 0.3), n_max, cache);
    const auto rep = analyze(t, c);
    const auto cf = closed_form_negativity(rep.closed_form);
    const std::string id = std::string("closed form ") + to_string(c.species) + " " +
                           to_string(c.state) + " " + std::to_string(c.mode_a) + "," +
                           std::to_string(c.mode_b);
    if (!cf) {
      log.record(false, id + " missing", 0.0, 0.0);
      continue;
    }
    log.below(id, std::abs(*cf - rep.negativity), 1e-6);
  }

  // Pauli blocking: a one-particle state seen on an opposite-charge pair.
  {
    const PairCase c{Species::fermion, InStateKind::one_particle, 1, -2};
    const auto t = assemble(c.species, TravelScenario::single_segment(0.01, 0.3), n_max, cache);
    double worst = 0.0;
    for (double h : default_probes()) {
      AnalysisOptions opts;
      opts.h = h;
      opts.closed_forms = false;
      worst = std::max(worst, analyze(t, c, opts).negativity);
    }
    log.below("pauli blocking fermion one_particle 1,-2", worst, 1e-10);
  }
  return log.ok();
}

}  // namespace cavent
