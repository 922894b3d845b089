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

#include "cavent/states.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <unordered_map>

#include "cavent/errors.hpp"

namespace cavent {

// ---------------------------------------------------------------- FockKey

FockKey::FockKey(std::initializer_list<int> labels) {
  for (int l : labels) *this = with(l);
}

int FockKey::count(int mode) const {
  int c = 0;
  for (int i = 0; i < size_; ++i) c += labels_[i] == mode;
  return c;
}

FockKey FockKey::with(int mode) const {
  if (size_ == kMaxQuanta) throw ContractViolation("FockKey: too many quanta");
  FockKey out = *this;
  int i = size_;
  while (i > 0 && out.labels_[i - 1] > mode) {
    out.labels_[i] = out.labels_[i - 1];
    --i;
  }
  out.labels_[i] = static_cast<std::int16_t>(mode);
  ++out.size_;
  return out;
}

FockKey FockKey::without(int mode) const {
  FockKey out;
  bool removed = false;
  for (int i = 0; i < size_; ++i) {
    if (!removed && labels_[i] == mode) {
      removed = true;
      continue;
    }
    out.labels_[out.size_++] = labels_[i];
  }
  if (!removed) throw ContractViolation("FockKey: mode not occupied");
  return out;
}

FockKey FockKey::rest(int mode_a, int mode_b) const {
  FockKey out;
  for (int i = 0; i < size_; ++i) {
    if (labels_[i] != mode_a && labels_[i] != mode_b) {
      out.labels_[out.size_++] = labels_[i];
    }
  }
  return out;
}

std::size_t FockKeyHash::operator()(const FockKey& k) const {
  std::size_t h = static_cast<std::size_t>(k.size());
  for (int i = 0; i < k.size(); ++i) {
    h = h * 1000003u ^ static_cast<std::size_t>(k.label(i) + 32768);
  }
  return h;
}

// --------------------------------------------------------- StateExpansion

H2Series StateExpansion::amplitude(const FockKey& key) const {
  const auto it = std::lower_bound(
      amplitudes.begin(), amplitudes.end(), key,
      [](const auto& e, const FockKey& k) { return e.first < k; });
  return it != amplitudes.end() && it->first == key ? it->second : H2Series();
}

H2Series StateExpansion::norm_squared() const {
  H2Series n;
  for (const auto& [key, a] : amplitudes) n += times_conj(a, a);
  return n;
}

double StateExpansion::charge_violation(int charge) const {
  double worst = 0.0;
  for (const auto& [key, a] : amplitudes) {
    int q = 0;
    for (int i = 0; i < key.size(); ++i) q += key.label(i) >= 0 ? 1 : -1;
    if (q == charge) continue;
    for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(a[k]));
  }
  return worst;
}

namespace {

using Work = std::unordered_map<FockKey, H2Series, FockKeyHash>;

struct Term {
  int mode;
  bool create;
  H2Series coeff;
};

struct PairTerm {
  int first;   // applied second
  int second;  // applied first
  H2Series coeff;
};

int leading(const H2Series& s) { return s.leading_order(); }

// Which O(h^2) content to keep.
struct Filter {
  bool active = false;
  int a = 0, b = 0;
  std::vector<FockKey> rests;

  static Filter none() { return {}; }
  static Filter around(const std::optional<std::pair<int, int>>& focus,
                       std::vector<FockKey> zeroth_keys) {
    Filter f;
    if (!focus) return f;
    f.active = true;
    f.a = focus->first;
    f.b = focus->second;
    for (const auto& k : zeroth_keys) f.rests.push_back(k.rest(f.a, f.b));
    return f;
  }

  bool keeps(const FockKey& key) const {
    if (!active) return true;
    const auto r = key.rest(a, b);
    return std::find(rests.begin(), rests.end(), r) != rests.end();
  }

  // Is the key one ladder step away from an allowed rest (or on one)?
  bool near(const FockKey& key) const {
    if (!active) return true;
    const auto r = key.rest(a, b);
    for (const auto& allowed : rests) {
      int extra = 0, missing = 0;
      for (int i = 0; i < r.size(); ++i) {
        const int l = r.label(i);
        if (i > 0 && r.label(i - 1) == l) continue;
        extra += std::max(0, r.count(l) - allowed.count(l));
      }
      for (int i = 0; i < allowed.size(); ++i) {
        const int l = allowed.label(i);
        if (i > 0 && allowed.label(i - 1) == l) continue;
        missing += std::max(0, allowed.count(l) - r.count(l));
      }
      if (extra + missing <= 1) return true;
    }
    return false;
  }

  // Could unobserved labels `partial` still end up in an allowed rest?
  bool fits(const FockKey& partial) const {
    if (!active) return true;
    const auto r = partial.rest(a, b);
    for (const auto& allowed : rests) {
      bool inside = true;
      for (int i = 0; i < r.size() && inside; ++i) {
        inside = r.count(r.label(i)) <= allowed.count(r.label(i));
      }
      if (inside) return true;
    }
    return false;
  }
};

// One creation or annihilation on a basis vector. Returns the factor (0 if
// the result vanishes).
double ladder(Species species, FermionOrdering ordering, const FockKey& key,
              int mode, bool create, FockKey& out) {
  const int n = key.count(mode);
  if (species == Species::boson) {
    if (create) {
      out = key.with(mode);
      return std::sqrt(double(n + 1));
    }
    if (n == 0) return 0.0;
    out = key.without(mode);
    return std::sqrt(double(n));
  }
  if (create == (n == 1)) return 0.0;
  int before = 0;
  for (int i = 0; i < key.size(); ++i) {
    const int l = key.label(i);
    if (l == mode) continue;
    before += ordering == FermionOrdering::ascending ? (l < mode) : (l > mode);
  }
  out = create ? key.with(mode) : key.without(mode);
  return (before % 2) ? -1.0 : 1.0;
}

void accumulate(Work& w, const FockKey& key, const H2Series& amp) {
  if (amp.is_zero()) return;
  auto [it, inserted] = w.try_emplace(key, amp);
  if (!inserted) it->second += amp;
}

void prune(Work& w, const Filter& filter) {
  for (auto it = w.begin(); it != w.end();) {
    if (!filter.keeps(it->first)) it->second[2] = Complex();
    it = it->second.is_zero() ? w.erase(it) : std::next(it);
  }
}

Work apply(const Work& in, std::span<const Term> terms, Species species,
           FermionOrdering ordering, const Filter& filter) {
  // An O(h) term acting on an O(h) amplitude only matters if it lands on an
  // allowed rest, so such terms skip sources far from every allowed rest.
  using Entry = std::pair<const FockKey, H2Series>;
  std::vector<const Entry*> all, close;
  for (const auto& e : in) {
    all.push_back(&e);
    if (leading(e.second) == 0 || filter.near(e.first)) close.push_back(&e);
  }
  Work out;
  for (const auto& t : terms) {
    const int lt = leading(t.coeff);
    if (lt >= 3) continue;
    for (const Entry* e : lt == 0 ? all : close) {
      const auto& [key, amp] = *e;
      if (lt + leading(amp) >= 3) continue;
      FockKey next;
      const double f = ladder(species, ordering, key, t.mode, t.create, next);
      if (f == 0.0) continue;
      H2Series prod = t.coeff * amp * f;
      if (prod.leading_order() == 2 && !filter.keeps(next)) continue;
      accumulate(out, next, prod);
    }
  }
  prune(out, filter);
  return out;
}

Work apply_pairs(const Work& in, std::span<const PairTerm> terms, Species species,
                 FermionOrdering ordering, const Filter& filter) {
  Work out;
  for (const auto& t : terms) {
    const int lt = leading(t.coeff);
    if (lt >= 3) continue;
    for (const auto& [key, amp] : in) {
      if (lt + leading(amp) >= 3) continue;
      FockKey mid, next;
      double f = ladder(species, ordering, key, t.second, true, mid);
      if (f == 0.0) continue;
      f *= ladder(species, ordering, mid, t.first, true, next);
      if (f == 0.0) continue;
      H2Series prod = t.coeff * amp * f;
      if (prod.leading_order() == 2 && !filter.keeps(next)) continue;
      accumulate(out, next, prod);
    }
  }
  prune(out, filter);
  return out;
}

// |0> + W|0> + W^2|0>/2 for the pair-creation operator W.
Work exponentiate(const std::vector<PairTerm>& pairs, Species species,
                  FermionOrdering ordering, const Filter& filter) {
  Work vac;
  vac.emplace(FockKey(), H2Series(1.0));
  Work once = apply_pairs(vac, pairs, species, ordering, filter);

  // W^2 terms are O(h^2): under a filter only labels that can still land in
  // an allowed rest are worth multiplying.
  std::vector<PairTerm> narrow;
  Work once_narrow;
  for (const auto& t : pairs) {
    if (filter.fits(FockKey{t.first, t.second})) narrow.push_back(t);
  }
  for (const auto& [k, a] : once) {
    if (filter.fits(k)) once_narrow.emplace(k, a);
  }
  Work twice = apply_pairs(once_narrow, narrow, species, ordering, filter);

  Work psi = std::move(vac);
  for (const auto& [k, a] : once) accumulate(psi, k, a);
  for (const auto& [k, a] : twice) accumulate(psi, k, a * 0.5);
  return psi;
}

StateExpansion finish(Work w, Species species, FermionOrdering ordering) {
  StateExpansion s{species, ordering, {}};
  H2Series n2;
  for (const auto& [k, a] : w) n2 += times_conj(a, a);
  const Complex s0 = n2[0];
  if (std::abs(s0) < 1e-300) throw ContractViolation("state has zero norm");
  const Complex x1 = n2[1] / s0, x2 = n2[2] / s0;
  const Complex c0 = 1.0 / std::sqrt(s0.real());
  const H2Series scale(c0, -0.5 * x1 * c0, c0 * (-0.5 * x2 + 0.375 * x1 * x1));
  s.amplitudes.reserve(w.size());
  for (auto& [k, a] : w) {
    const H2Series v = a * scale;
    if (!v.is_zero()) s.amplitudes.emplace_back(k, v);
  }
  std::sort(s.amplitudes.begin(), s.amplitudes.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return s;
}

Work to_work(const StateExpansion& s) {
  Work w;
  for (const auto& [k, a] : s.amplitudes) w.emplace(k, a);
  return w;
}

}  // namespace

// ---------------------------------------------------------------- bosons

BosonVacuumData boson_vacuum_data(const BosonBogoliubov& b) {
  b.validate();
  BosonVacuumData d;
  d.V = -(b.beta.conjugate() * b.alpha.inverse());
  d.norm = H2Series(1.0, 0.0, -0.25 * d.V.order(1).squaredNorm());
  return d;
}

namespace {
std::vector<PairTerm> boson_pairs(const BosonVacuumData& data) {
  // W = 1/2 sum_pq V_pq a_p^+ a_q^+; symmetric, so p <= q with weights.
  std::vector<PairTerm> pairs;
  const int n = static_cast<int>(data.V.rows());
  for (int p = 1; p <= n; ++p) {
    for (int q = p; q <= n; ++q) {
      H2Series c = p == q ? data.at(p, p) * 0.5 : 0.5 * (data.at(p, q) + data.at(q, p));
      if (!c.is_zero()) pairs.push_back({p, q, c});
    }
  }
  return pairs;
}
}  // namespace

StateExpansion boson_vacuum_expansion(const BosonVacuumData& data,
                                      const ExpansionOptions& opts) {
  const auto filter = Filter::around(opts.focus, {FockKey()});
  return finish(exponentiate(boson_pairs(data), Species::boson, opts.ordering, filter),
                Species::boson, opts.ordering);
}

StateExpansion boson_one_particle_expansion(const BosonBogoliubov& b,
                                            const BosonVacuumData& data, int k,
                                            const ExpansionOptions& opts) {
  const int n = b.n_max();
  if (k < 1 || k > n) throw ContractViolation("one-particle mode outside truncation");
  const auto vac = boson_vacuum_expansion(data, opts);
  // a_k^+ = sum_m (conj(alpha_mk) a~_m^+ + beta_mk a~_m)
  std::vector<Term> terms;
  for (int m = 1; m <= n; ++m) {
    terms.push_back({m, true, b.alpha(m - 1, k - 1).conj()});
    terms.push_back({m, false, b.beta(m - 1, k - 1)});
  }
  const auto filter = Filter::around(opts.focus, {FockKey{k}});
  return finish(apply(to_work(vac), terms, Species::boson, opts.ordering, filter),
                Species::boson, opts.ordering);
}

// -------------------------------------------------------------- fermions

FermionVacuumData fermion_vacuum_data(const FermionBogoliubov& f, double tol) {
  f.validate();
  const int n = f.n_max;
  const auto& A = f.A;
  // Rows/cols: index i <-> kappa = i - n; negative block first.
  const SeriesMatrix App = A.block(n, n, n + 1, n + 1);
  const SeriesMatrix Amp = A.block(0, n, n, n + 1);
  const SeriesMatrix Apm = A.block(n, 0, n + 1, n);
  const SeriesMatrix Amm = A.block(0, 0, n, n);

  // b_n annihilates the vacuum:  A++^T V = -A-+^T
  const SeriesMatrix V = -(App.transpose().inverse() * Amp.transpose());
  FermionVacuumData d;
  d.n_max = n;
  std::array<ComplexMatrix, 3> ordered;
  for (int k = 0; k < 3; ++k) ordered[k] = V.order(k).rowwise().reverse();
  d.V = SeriesMatrix(std::move(ordered));

  if (n > 0) {
    // c_n annihilates it too:  V = conj(A+-) conj(A--)^-1
    const SeriesMatrix W = Apm.conjugate() * Amm.conjugate().inverse();
    const int w = std::max(1, n / 2);
    for (int k = 0; k < 3; ++k) {
      const ComplexMatrix diff =
          (V.order(k) - W.order(k)).block(0, n - w, w + 1, w);
      d.consistency = std::max(d.consistency, diff.cwiseAbs().maxCoeff());
    }
    if (d.consistency > tol) {
      throw DiagnosticError("fermion_vacuum_data: annihilation conditions disagree",
                            d.consistency);
    }
  }
  d.norm = H2Series(1.0, 0.0, -0.5 * d.V.order(1).squaredNorm());
  return d;
}

namespace {

std::vector<PairTerm> fermion_pairs(const FermionVacuumData& data) {
  // W = sum_{p>=0, q<0} V_pq b~_p^+ c~_q^+
  std::vector<PairTerm> pairs;
  for (int p = 0; p <= data.n_max; ++p) {
    for (int q = -1; q >= -data.n_max; --q) {
      const H2Series c = data.at(p, q);
      if (!c.is_zero()) pairs.push_back({p, q, c});
    }
  }
  return pairs;
}

// In-creators in the out basis.
std::vector<Term> particle_creator(const FermionBogoliubov& f, int kappa) {
  std::vector<Term> t;
  for (int m = -f.n_max; m <= f.n_max; ++m) {
    t.push_back({m, m >= 0, f.A(f.index(m), f.index(kappa)).conj()});
  }
  return t;
}

std::vector<Term> antiparticle_creator(const FermionBogoliubov& f, int kappa) {
  std::vector<Term> t;
  for (int m = -f.n_max; m <= f.n_max; ++m) {
    t.push_back({m, m < 0, f.A(f.index(m), f.index(kappa))});
  }
  return t;
}

}  // namespace

StateExpansion fermion_state_expansion(const FermionBogoliubov& f,
                                       const FermionVacuumData& data,
                                       const FermionInState& in,
                                       const ExpansionOptions& opts) {
  if (data.n_max != f.n_max) throw ContractViolation("vacuum data truncation mismatch");
  const auto sp = Species::fermion;
  FockKey zeroth;
  if (in.kind != FermionInKind::vacuum) {
    if (in.kappa < 0 || !f.contains(in.kappa)) {
      throw ContractViolation("in-particle needs 0 <= kappa <= n_max");
    }
    zeroth = zeroth.with(in.kappa);
  }
  if (in.kind == FermionInKind::pair) {
    if (in.kappa_prime >= 0 || !f.contains(in.kappa_prime)) {
      throw ContractViolation("in-antiparticle needs -n_max <= kappa' < 0");
    }
    zeroth = zeroth.with(in.kappa_prime);
  }

  const auto vac_filter = Filter::around(opts.focus, {FockKey()});
  Work psi = exponentiate(fermion_pairs(data), sp, opts.ordering, vac_filter);
  if (in.kind == FermionInKind::vacuum) return finish(std::move(psi), sp, opts.ordering);

  const auto filter = Filter::around(opts.focus, {zeroth});
  if (in.kind == FermionInKind::pair) {
    // An intermediate key is still useful if the antiparticle is yet to come.
    Filter mid = filter;
    if (mid.active) {
      for (auto& r : mid.rests) {
        if (r.count(in.kappa) == 1) r = r.without(in.kappa);
      }
    }
    psi = apply(psi, antiparticle_creator(f, in.kappa_prime), sp, opts.ordering, mid);
  }
  psi = apply(psi, particle_creator(f, in.kappa), sp, opts.ordering, filter);
  if (psi.empty()) throw ContractViolation("in-state vanishes (Pauli exclusion)");
  return finish(std::move(psi), sp, opts.ordering);
}

// ------------------------------------------------------------- reduction

namespace {
// Sign of moving the creators of a, then b, to the front of the product.
int front_sign(const FockKey& key, FermionOrdering ordering, int a, int b) {
  std::vector<int> seq;
  for (int i = 0; i < key.size(); ++i) seq.push_back(key.label(i));
  if (ordering == FermionOrdering::descending) std::reverse(seq.begin(), seq.end());
  int swaps = 0;
  for (int mode : {a, b}) {
    const auto it = std::find(seq.begin(), seq.end(), mode);
    if (it == seq.end()) continue;
    swaps += static_cast<int>(it - seq.begin());
    seq.erase(it);
  }
  return swaps % 2 ? -1 : 1;
}
}  // namespace

ReducedDensityMatrix reduce_to_pair(const StateExpansion& state, int mode_a,
                                    int mode_b, int cap) {
  if (mode_a == mode_b) throw ContractViolation("reduce_to_pair: modes must differ");
  const bool fermion = state.species == Species::fermion;
  if (cap < 0) cap = fermion ? 1 : 4;
  ReducedDensityMatrix r;
  r.species = state.species;
  r.mode_a = mode_a;
  r.mode_b = mode_b;
  r.cap = cap;
  r.rho = SeriesMatrix::Zero(r.dimension(), r.dimension());

  std::map<FockKey, std::vector<std::pair<int, H2Series>>> by_rest;
  for (const auto& [key, amp] : state.amplitudes) {
    const int na = key.count(mode_a), nb = key.count(mode_b);
    if (na > cap || nb > cap) {
      if (std::abs(amp[0]) > 1e-12 || std::abs(amp[1]) > 1e-12) {
        throw ContractViolation("reduce_to_pair: occupation cap too small");
      }
      ++r.dropped;
      continue;
    }
    const double sign = fermion ? front_sign(key, state.ordering, mode_a, mode_b) : 1.0;
    by_rest[key.rest(mode_a, mode_b)].emplace_back(r.index(na, nb), amp * sign);
  }
  for (const auto& [rest, entries] : by_rest) {
    for (const auto& [i, ai] : entries) {
      for (const auto& [j, aj] : entries) {
        const H2Series c = times_conj(ai, aj);
        if (!c.is_zero()) r.rho.add(i, j, c);
      }
    }
  }
  return r;
}

}  // namespace cavent
