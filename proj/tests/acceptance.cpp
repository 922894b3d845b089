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

// Acceptance checks 1-9. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "cavent/building_blocks.hpp"
#include "cavent/errors.hpp"
#include "cavent/negativity.hpp"
#include "cavent/oracles.hpp"
#include "cavent/scenarios.hpp"
#include "cavent/states.hpp"

using namespace cavent;

namespace {

constexpr int kNmax = 40;
constexpr double kH = 0.01;

const CacheOptions& cache() {
  static const CacheOptions c = CacheOptions::from_environment();
  return c;
}

Bogoliubov at_u(Species s, double u, int n_max = kNmax) {
  return assemble(s, TravelScenario::single_segment(kH, u), n_max, cache());
}

struct Outcome {
  bool ok;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---------------------------------------------------------------------- 1

Outcome identities() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rule = oracles::QuadratureRule::composite(oracles::default_panels(kNmax));
  double boson = 0.0, fermion = 0.0;
  for (double h : {0.08, 0.04, 0.02, 0.01}) {
    const auto b = oracles::boson_overlap(h, kNmax, rule);
    boson = std::max(boson, identity_check(b.alpha.cast<Complex>(),
                                           b.beta.cast<Complex>(), kNmax / 2).max());
    const ComplexMatrix a = oracles::fermion_overlap(h, kNmax, rule).cast<Complex>();
    fermion = std::max(fermion, identity_check(a, kNmax, kNmax / 2).max());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {boson < 1e-8 && fermion < 1e-8 && secs < 60.0,
          fmt("boson %.2e, fermion %.2e, %.1f s", boson, fermion, secs)};
}

// ---------------------------------------------------------------------- 2

// Max entrywise |exact(h) - series(h)| on the interior window.
double series_residual(const SeriesMatrix& s, const ComplexMatrix& exact, double h,
                       Eigen::Index offset, Eigen::Index w) {
  return (s.evaluate(h) - exact).block(offset, offset, w, w).cwiseAbs().maxCoeff();
}

Outcome series_fidelity() {
  const auto rule = oracles::QuadratureRule::composite(oracles::default_panels(kNmax));
  const CavityGeometry g{1.0, kH};
  const auto bb = boson_building_block(g, kNmax, cache());
  const auto fb = fermion_building_block(g, kNmax, 0.0, cache());
  const int w = kNmax / 2;
  double worst_drift = 0.0;
  std::string detail;
  auto record = [&](const std::string& name, double r1, double r2) {
    const double c1 = r1 / std::pow(kH, 3), c2 = r2 / std::pow(kH / 2, 3);
    worst_drift = std::max(worst_drift, std::abs(c2 / c1 - 1.0));
    detail += name + fmt(" C %.3g -> %.3g; ", c1, c2);
  };
  double r[2][3];
  for (int i = 0; i < 2; ++i) {
    const double h = i == 0 ? kH : kH / 2;
    const auto b = oracles::boson_overlap(h, kNmax, rule);
    r[i][0] = series_residual(bb.alpha, b.alpha.cast<Complex>(), h, 0, w);
    r[i][1] = series_residual(bb.beta, b.beta.cast<Complex>(), h, 0, w);
    const ComplexMatrix a = oracles::fermion_overlap(h, kNmax, rule).cast<Complex>();
    r[i][2] = series_residual(fb.A, a, h, kNmax - w, 2 * w + 1);
  }
  record("alpha", r[0][0], r[1][0]);
  record("beta", r[0][1], r[1][1]);
  record("A", r[0][2], r[1][2]);
  return {worst_drift <= 0.2, detail + fmt("max drift %.1f%%", 100 * worst_drift)};
}

// ---------------------------------------------------------------------- 3

double max_deviation(const oracles::FockSpace& space, const StateExpansion& e,
                     const oracles::OracleState& o) {
  double worst = 0.0;
  const auto& modes = space.modes();
  for (std::size_t s = 0; s < space.dimension(); ++s) {
    const auto occ = space.occupations(s);
    FockKey k;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      for (int c = 0; c < occ[i]; ++c) k = k.with(modes[i]);
    }
    worst = std::max(worst, std::abs(e.amplitude(k).evaluate(kH) - o.amplitudes(s)));
  }
  return worst;
}

Outcome state_oracles() {
  const double bound = 10.0 * std::pow(kH, 3);
  double worst = 0.0;
  std::string detail;
  const double u = 0.3;
  {
    const auto t = std::get<BosonBogoliubov>(at_u(Species::boson, u));
    const auto data = boson_vacuum_data(t);
    const int w = 8;
    std::vector<int> modes;
    for (int i = 1; i <= w; ++i) modes.push_back(i);
    const auto space = oracles::FockSpace::bosonic(modes, 4, 6);
    const auto m = evaluate_at(t, kH);
    const ComplexMatrix a = m.alpha.topLeftCorner(w, w), b = m.beta.topLeftCorner(w, w);
    const auto vac = oracles::fock_vacuum(space, a, b);
    const auto one = oracles::fock_apply_instate(space, vac, a, b, 1);
    const double d0 = max_deviation(space, boson_vacuum_expansion(data), vac);
    const double d1 = max_deviation(space, boson_one_particle_expansion(t, data, 1), one);
    worst = std::max({worst, d0, d1});
    detail += fmt("boson vacuum %.2e, one-particle %.2e; ", d0, d1);
  }
  {
    const auto t = std::get<FermionBogoliubov>(at_u(Species::fermion, u));
    const auto data = fermion_vacuum_data(t);
    std::vector<int> modes;
    for (int k = -5; k <= 4; ++k) modes.push_back(k);
    const int w = static_cast<int>(modes.size());
    const auto space = oracles::FockSpace::fermionic(modes, 8);
    const ComplexMatrix a = evaluate_at(t, kH).block(kNmax - 5, kNmax - 5, w, w);
    const auto vac = oracles::fock_vacuum(space, a);
    const std::pair<const char*, FermionInState> ins[] = {
        {"vacuum", FermionInState::vacuum()},
        {"one-particle", FermionInState::one_particle(1)},
        {"pair", FermionInState::pair(2, -1)}};
    for (const auto& [name, in] : ins) {
      const auto o = in.kind == FermionInKind::vacuum ? vac
                     : in.kind == FermionInKind::one_particle
                         ? oracles::fock_apply_instate(space, vac, a, in.kappa)
                         : oracles::fock_apply_instate(space, vac, a, in.kappa, in.kappa_prime);
      const double d = max_deviation(space, fermion_state_expansion(t, data, in), o);
      worst = std::max(worst, d);
      detail += std::string("fermion ") + name + fmt(" %.2e; ", d);
    }
  }
  return {worst < bound, detail + fmt("bound %.0e", bound)};
}

// ---------------------------------------------------------------------- 4

Outcome closed_forms() {
  // O(h^3) or better: residual ratio at least 8 / 1.2 under h-halving, or
  // both residuals at rounding level.
  const double floor = 1e-15;
  const std::pair<PairCase, std::vector<std::string>> cases[] = {
      {{Species::boson, InStateKind::vacuum, 1, 4}, {"lambda4", "lambda6"}},
      {{Species::boson, InStateKind::one_particle, 1, 4}, {"mu3", "mu8"}},
      {{Species::fermion, InStateKind::vacuum, 2, -1}, {"nu3"}},
      {{Species::fermion, InStateKind::one_particle, 1, 4}, {"nu3"}},
      {{Species::fermion, InStateKind::pair, 2, -1}, {"nu3"}},
  };
  bool ok = true;
  std::string detail;
  for (const auto& [c, names] : cases) {
    const auto t = at_u(c.species, 0.3);
    const auto pt = partial_transpose(reduced_state(t, c));
    for (const auto& name : names) {
      double res[2];
      for (int i = 0; i < 2; ++i) {
        const double h = i == 0 ? kH : kH / 2;
        const auto eig = pt_eigenvalues(pt, h);
        const auto cf = closed_form_eigenvalues(t, c, h);
        const auto it = std::find_if(cf.begin(), cf.end(),
                                     [&](const ClosedFormEigenvalue& e) { return e.name == name; });
        if (it == cf.end()) {
          res[i] = INFINITY;
          continue;
        }
        double best = INFINITY;
        for (double e : eig) best = std::min(best, std::abs(e - it->value));
        res[i] = best;
      }
      const bool at_floor = res[0] < floor && res[1] < floor;
      const double ratio = res[0] / res[1];
      const bool pass = std::isfinite(res[0]) && (at_floor || ratio >= 8.0 / 1.2);
      ok = ok && pass;
      detail += std::string(to_string(c.state)).substr(0, 3) + "/" + name +
                (at_floor ? fmt(" %.0e;", std::max(res[0], res[1])) : fmt(" x%.1f;", ratio)) + " ";
    }
  }
  return {ok, detail};
}

// ---------------------------------------------------------------------- 5

Outcome parity() {
  bool ok = true;
  double worst_coef = 0.0, worst_slope = 0.0;
  for (double u : {0.1, 0.3, 0.45, 0.7}) {
    const auto t = at_u(Species::boson, u);
    const auto& b = std::get<BosonBogoliubov>(t);
    const auto odd = analyze(t, {Species::boson, InStateKind::vacuum, 1, 4}).leading;
    const auto even = analyze(t, {Species::boson, InStateKind::vacuum, 1, 3}).leading;
    const double beta = std::abs(b.beta.order(1)(0, 3));
    worst_coef = std::max(worst_coef, std::abs(odd.coefficient - beta));
    worst_slope = std::max({worst_slope, std::abs(odd.slope - 1.0), std::abs(even.slope - 2.0)});
    ok = ok && !odd.zero && odd.power == 1 && !even.zero && even.power == 2 && !odd.ambiguous &&
         !even.ambiguous;
  }
  ok = ok && worst_coef < 1e-8 && worst_slope <= 0.05;
  return {ok, fmt("|c - |beta1_14|| %.2e, slope deviation %.3f", worst_coef, worst_slope)};
}

// ---------------------------------------------------------------------- 6

Outcome ordering_claim() {
  const auto grid = preset("fig1a").grid();
  double worst_formula = 0.0, worst_order = 0.0;
  for (double u : grid) {
    const auto t = at_u(Species::boson, u);
    const auto& b = std::get<BosonBogoliubov>(t);
    const double vac = perturbative_coefficients(
        partial_transpose(reduced_state(t, {Species::boson, InStateKind::vacuum, 1, 4})))[0];
    const double one = perturbative_coefficients(partial_transpose(
        reduced_state(t, {Species::boson, InStateKind::one_particle, 1, 4})))[0];
    const double a = std::abs(b.alpha.order(1)(3, 0));
    const double be = std::abs(b.beta.order(1)(3, 0));
    const double expected = std::sqrt(a * a + 2.0 * be * be);
    worst_formula = std::max(worst_formula, std::abs(one - expected));
    worst_order = std::max(worst_order, vac - one);
  }
  return {worst_formula < 1e-8 && worst_order <= 1e-8,
          fmt("%.0f points, |c - formula| %.2e, max(vacuum - one) %.2e",
              static_cast<double>(grid.size()), worst_formula, worst_order)};
}

// ---------------------------------------------------------------------- 7

Outcome fermion_structure() {
  double blocked = 0.0, pair_gap = 0.0, vac_gap = 0.0;
  bool ok = true;
  for (double u : {0.1, 0.3, 0.45, 0.7}) {
    const auto t = at_u(Species::fermion, u);
    const auto& f = std::get<FermionBogoliubov>(t);
    for (const PairCase c : {PairCase{Species::fermion, InStateKind::one_particle, 1, -2},
                             PairCase{Species::fermion, InStateKind::one_particle, 2, -1}}) {
      const auto pt = partial_transpose(reduced_state(t, c));
      for (double h : default_probes()) blocked = std::max(blocked, negativity_numeric(pt, h));
    }
    const auto pair = analyze(t, {Species::fermion, InStateKind::pair, 2, -1}).leading;
    const auto vac = analyze(t, {Species::fermion, InStateKind::vacuum, 2, -1}).leading;
    ok = ok && !pair.zero && !vac.zero && pair.power == 1 && vac.power == 1;
    pair_gap = std::max(pair_gap, std::abs(pair.coefficient - vac.coefficient));
    vac_gap = std::max(vac_gap, std::abs(vac.coefficient -
                                         std::abs(f.A.order(1)(f.index(2), f.index(-1)))));
  }
  ok = ok && blocked < 1e-10 && pair_gap < 1e-8 && vac_gap < 1e-8;
  return {ok, fmt("(a) %.1e (b) %.1e (c) %.1e", blocked, pair_gap, vac_gap)};
}

// ---------------------------------------------------------------------- 8

Outcome periodicity() {
  const auto t0 = std::chrono::steady_clock::now();
  double period = 0.0, boson_ends = 0.0;
  bool converged = true;
  for (const auto& name : preset_names()) {
    auto first = preset(name);
    const auto r1 = run_sweep(first);
    converged = converged && r1.converged();
    auto second = first;
    second.u_start += 1.0;
    second.u_stop += 1.0;
    second.convergence_check = false;
    const auto r2 = run_sweep(second);
    for (std::size_t i = 0; i < r1.rows.size(); ++i) {
      period = std::max(period, std::abs(r1.rows[i].value - r2.rows[i].value));
      const auto& c = first.curves[r1.rows[i].curve];
      if (c.pair.species == Species::boson &&
          (r1.rows[i].u == 0.0 || r1.rows[i].u == 1.0)) {
        boson_ends = std::max(boson_ends, std::abs(r1.rows[i].value));
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {period < 1e-8 && boson_ends < 1e-8 && secs < 300.0 && converged,
          fmt("max |N(u) - N(u+1)| %.1e, boson N(0), N(1) %.1e, %.0f s for both presets "
              "twice",
              period, boson_ends, secs)};
}

// ---------------------------------------------------------------------- 9

Outcome conventions() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::vector<CurveSpec> curves = preset("fig1a").curves;
  for (const auto& c : preset("fig1b").curves) curves.push_back(c);
  curves.push_back({"pair", {Species::fermion, InStateKind::pair, 2, -1}, 1});
  double worst = 0.0;
  for (double u : {0.17, 0.55, 0.83}) {
    for (const auto& c : curves) {
      const auto t = at_u(c.pair.species, u);
      const std::size_t n = c.pair.species == Species::boson ? kNmax : 2 * kNmax + 1;
      std::vector<double> angles(n);
      for (auto& a : angles) a = angle(rng);
      const double scale = std::pow(kH, c.power);
      AnalysisOptions opts;
      opts.closed_forms = false;
      const double base = analyze(t, c.pair, opts).negativity / scale;
      worst = std::max(worst, std::abs(analyze(rephase_out(t, angles), c.pair, opts).negativity /
                                           scale - base));
      if (c.pair.species == Species::fermion) {
        opts.ordering = FermionOrdering::descending;
        worst = std::max(worst, std::abs(analyze(t, c.pair, opts).negativity / scale - base));
      }
    }
  }
  return {worst < 1e-10, fmt("max change %.1e (normalized)", worst)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"Bogoliubov identities at finite h", identities},
      {"O(h^2) series fidelity", series_fidelity},
      {"state expansions vs truncated Fock oracle", state_oracles},
      {"closed-form eigenvalues vs numeric spectrum", closed_forms},
      {"parity dichotomy of the boson vacuum", parity},
      {"one-particle boson coefficient and ordering", ordering_claim},
      {"fermionic structure", fermion_structure},
      {"periodicity and preset sweep runtime", periodicity},
      {"convention invariance", conventions},
  };
  int failed = 0;
  int i = 0;
  for (const auto& [name, run] : criteria) {
    ++i;
    Outcome o{false, ""};
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %d: %s [%s]\n", o.ok ? "PASS" : "FAIL", i, name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.ok;
  }
  return failed == 0 ? 0 : 1;
}
