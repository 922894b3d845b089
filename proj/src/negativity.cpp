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

#include "cavent/negativity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cavent/errors.hpp"

namespace cavent {

SeriesMatrix partial_transpose(const ReducedDensityMatrix& rho, Factor on) {
  const int d = rho.cap + 1;
  std::array<ComplexMatrix, 3> out;
  for (int k = 0; k < 3; ++k) {
    const auto& m = rho.rho.order(k);
    out[k].resize(m.rows(), m.cols());
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        for (int a2 = 0; a2 < d; ++a2) {
          for (int b2 = 0; b2 < d; ++b2) {
            out[k](a * d + b, a2 * d + b2) = on == Factor::second
                                                 ? m(a * d + b2, a2 * d + b)
                                                 : m(a2 * d + b, a * d + b2);
          }
        }
      }
    }
  }
  return SeriesMatrix(std::move(out));
}

namespace {

ComplexMatrix hermitian_part(const ComplexMatrix& m, double tol, const char* what) {
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol) throw ContractViolation(std::string(what) + ": matrix is not Hermitian");
  return 0.5 * (m + m.adjoint());
}

double one_norm(const ComplexMatrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

double negative_sum(const Eigen::VectorXd& eig, double threshold) {
  double s = 0.0;
  for (double e : eig) {
    if (e < -threshold) s -= e;
  }
  return s;
}

}  // namespace

Eigen::VectorXd pt_eigenvalues(const SeriesMatrix& pt, double h) {
  const ComplexMatrix m = hermitian_part(pt.evaluate(h), 1e-10, "pt_eigenvalues");
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

double negativity_numeric(const SeriesMatrix& pt, double h) {
  const ComplexMatrix m = hermitian_part(pt.evaluate(h), 1e-10, "negativity_numeric");
  const Eigen::VectorXd eig =
      Eigen::SelfAdjointEigenSolver<ComplexMatrix>(m, Eigen::EigenvaluesOnly).eigenvalues();
  return negative_sum(eig, 1e-12 * one_norm(m));
}

std::vector<double> default_probes() { return {1e-2, 5e-3, 2.5e-3}; }

std::array<double, 2> perturbative_coefficients(const SeriesMatrix& pt) {
  const ComplexMatrix P0 = hermitian_part(pt.order(0), 1e-10, "leading_order");
  const ComplexMatrix P1 = hermitian_part(pt.order(1), 1e-10, "leading_order");
  const ComplexMatrix P2 = hermitian_part(pt.order(2), 1e-10, "leading_order");
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> zero(P0);
  const auto n = P0.rows();
  std::vector<Eigen::Index> kernel;
  ComplexMatrix resolvent = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double l = zero.eigenvalues()(i);
    const auto v = zero.eigenvectors().col(i);
    if (std::abs(l) < 1e-9) {
      kernel.push_back(i);
    } else {
      resolvent += v * v.adjoint() / l;
    }
  }
  std::array<double, 2> c{};
  // A negative O(1) eigenvalue is not a perturbation; leave it to the caller.
  if (kernel.empty()) return c;
  ComplexMatrix K(n, static_cast<Eigen::Index>(kernel.size()));
  for (std::size_t j = 0; j < kernel.size(); ++j) K.col(j) = zero.eigenvectors().col(kernel[j]);

  const ComplexMatrix E1 = hermitian_part(K.adjoint() * P1 * K, 1e-9, "leading_order");
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> first(E1);
  c[0] = negative_sum(first.eigenvalues(), 1e-9);

  std::vector<Eigen::Index> flat;
  for (Eigen::Index i = 0; i < first.eigenvalues().size(); ++i) {
    if (std::abs(first.eigenvalues()(i)) < 1e-9) flat.push_back(i);
  }
  if (flat.empty()) return c;
  ComplexMatrix K1(n, static_cast<Eigen::Index>(flat.size()));
  for (std::size_t j = 0; j < flat.size(); ++j) {
    K1.col(j) = K * first.eigenvectors().col(flat[j]);
  }
  const ComplexMatrix E2 = K1.adjoint() * (P2 - P1 * resolvent * P1) * K1;
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> second(0.5 * (E2 + E2.adjoint()));
  c[1] = negative_sum(second.eigenvalues(), 1e-12);
  return c;
}

namespace {

// Slope of log N against log h; nullopt when N vanishes at some probes.
std::optional<double> log_slope(std::span<const double> probes,
                                std::span<const double> values) {
  double mx = 0, my = 0;
  const double n = static_cast<double>(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) {
    if (values[i] <= 0.0) return std::nullopt;
    mx += std::log(probes[i]) / n;
    my += std::log(values[i]) / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double dx = std::log(probes[i]) - mx;
    sxy += dx * (std::log(values[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace

LeadingOrder leading_order(const SeriesMatrix& pt, std::span<const double> probes) {
  const auto defaults = default_probes();
  if (probes.empty()) probes = defaults;
  if (probes.size() < 2) throw ContractViolation("leading_order: need two probes");

  // A sizeable O(h^2) term can bend the slope at the given probes; the
  // ladder is then scaled down by decades.
  LeadingOrder out;
  double slope = 0.0;
  for (double scale = 1.0; scale >= 1e-3; scale /= 10.0) {
    out.probes.clear();
    out.values.clear();
    bool all_zero = true;
    for (double h : probes) {
      out.probes.push_back(h * scale);
      out.values.push_back(negativity_numeric(pt, h * scale));
      all_zero = all_zero && out.values.back() == 0.0;
    }
    if (all_zero && scale == 1.0) {
      out.zero = true;
      return out;
    }
    const auto fitted = log_slope(out.probes, out.values);
    if (!fitted) {
      throw DiagnosticError("leading_order: negativity vanishes at some probes only",
                            scale);
    }
    slope = *fitted;
    const long power = std::lround(slope);
    if (std::abs(slope - power) <= 0.05 && (power == 1 || power == 2)) {
      out.slope = slope;
      out.power = static_cast<int>(power);
      break;
    }
  }
  if (out.power == 0) {
    throw DiagnosticError("leading_order: log-log slope is not close to 1 or 2", slope);
  }
  const auto exact = perturbative_coefficients(pt);
  out.coefficient = exact[out.power - 1];

  // Richardson on g(h) = N(h) / h^p with h, h/2, h/4.
  const double h = out.probes.front();
  auto g = [&](double x) { return negativity_numeric(pt, x) / std::pow(x, out.power); };
  out.extrapolated = (g(h) - 6.0 * g(h / 2) + 8.0 * g(h / 4)) / 3.0;
  return out;
}

// ------------------------------------------------------------ f-sums

LeadingOrderSums::LeadingOrderSums(const BosonBogoliubov& b)
    : species(Species::boson), n_max(b.n_max()), first_order(b.beta.order(1)) {}

LeadingOrderSums::LeadingOrderSums(const FermionBogoliubov& f)
    : species(Species::fermion), n_max(f.n_max), first_order(f.A.order(1)) {}

double LeadingOrderSums::f_beta(int m, std::optional<int> excluded) const {
  if (species != Species::boson) throw ContractViolation("f_beta needs a boson transformation");
  double s = 0.0;
  for (int q = 1; q <= n_max; ++q) {
    if (excluded && q == *excluded) continue;
    s += std::norm(first_order(q - 1, m - 1));
  }
  return 0.5 * s;
}

double LeadingOrderSums::f_A(int m, std::optional<int> excluded) const {
  if (species != Species::fermion) throw ContractViolation("f_A needs a fermion transformation");
  double s = 0.0;
  for (int q = 0; q <= n_max; ++q) {
    if (excluded && q == *excluded) continue;
    s += std::norm(first_order(q + n_max, m + n_max));
  }
  return 0.5 * s;
}

double LeadingOrderSums::fbar_A(int m, std::optional<int> excluded) const {
  if (species != Species::fermion) throw ContractViolation("fbar_A needs a fermion transformation");
  double s = 0.0;
  for (int q = -n_max; q < 0; ++q) {
    if (excluded && q == *excluded) continue;
    s += std::norm(first_order(q + n_max, m + n_max));
  }
  return 0.5 * s;
}

// ------------------------------------------------------------ cases

const char* to_string(InStateKind k) {
  switch (k) {
    case InStateKind::vacuum: return "vacuum";
    case InStateKind::one_particle: return "one_particle";
    case InStateKind::pair: return "pair";
  }
  return "?";
}

void PairCase::validate(int n_max) const {
  if (mode_a == mode_b) throw ContractViolation("observed modes must differ");
  if (species == Species::boson) {
    if (mode_a < 1 || mode_b < 1 || mode_a > n_max || mode_b > n_max) {
      throw ContractViolation("boson modes must lie in [1, n_max]");
    }
    if (state == InStateKind::pair) {
      throw ContractViolation("pair in-states are fermionic");
    }
    return;
  }
  if (std::abs(mode_a) > n_max || std::abs(mode_b) > n_max) {
    throw ContractViolation("fermion modes must lie in [-n_max, n_max]");
  }
  if (state != InStateKind::vacuum && mode_a < 0) {
    throw ContractViolation("the in-particle mode must be >= 0");
  }
  if (state == InStateKind::pair && mode_b >= 0) {
    throw ContractViolation("the pair's second mode must be an antiparticle (< 0)");
  }
}

// ------------------------------------------------------------ closed forms

namespace {

constexpr double kTiny = 1e-9;

// Smallest eigenvalue of a 3x3 Hermitian matrix via the trigonometric
// solution of its characteristic cubic.
double smallest_root(const Eigen::Matrix3cd& m) {
  const double q = m.trace().real() / 3.0;
  const Eigen::Matrix3cd shifted = m - q * Eigen::Matrix3cd::Identity();
  const double p = std::sqrt((shifted * shifted).trace().real() / 6.0);
  if (p < 1e-300) return q;
  const Eigen::Matrix3cd b = shifted / p;
  const double r = std::clamp(b.determinant().real() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  return q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
}

// d1 + d2 - sqrt((d1 - d2)^2 + |c|^2), with d1, d2 h-stripped O(h^2) terms.
ClosedFormEigenvalue two_level(std::string name, double h, double f1, double f2,
                               const H2Series& coherence) {
  ClosedFormEigenvalue e;
  e.name = std::move(name);
  const Complex c = coherence.evaluate(h);
  e.value = h * h * (f1 + f2) -
            std::sqrt(std::pow(h * h * (f1 - f2), 2) + std::norm(c));
  if (std::abs(coherence[1]) > kTiny) {
    e.power = 1;
    e.coefficient = -std::abs(coherence[1]);
  } else {
    e.power = 2;
    e.coefficient = (f1 + f2) - std::sqrt(std::pow(f1 - f2, 2) + std::norm(coherence[2]));
  }
  return e;
}

bool opposite_parity(int a, int b) { return ((a + b) % 2 + 2) % 2 == 1; }

std::vector<ClosedFormEigenvalue> boson_forms(const BosonBogoliubov& b,
                                              const PairCase& c, double h) {
  const int k = c.mode_a, kp = c.mode_b, n = b.n_max();
  const LeadingOrderSums sums(b);
  const auto data = boson_vacuum_data(b);
  const ComplexMatrix& beta1 = b.beta.order(1);
  const Complex b1 = beta1(kp - 1, k - 1);
  std::vector<ClosedFormEigenvalue> out;

  if (c.state == InStateKind::vacuum) {
    const double s = std::norm(b1);
    out.push_back({"lambda4", -s * h * h, 2, -s});
    out.push_back(two_level("lambda6", h, sums.f_beta(k, kp), sums.f_beta(kp, k),
                            data.at(k, kp)));
    return out;
  }

  // One-particle state excited in k.
  if (!opposite_parity(k, kp)) return out;
  const double s = std::norm(b1);
  out.push_back({"mu3", -std::sqrt(3.0) * s * h * h, 2, -std::sqrt(3.0) * s});

  const ComplexMatrix& V1 = data.V.order(1);
  const ComplexMatrix& a1 = b.alpha.order(1);
  auto alpha = [&](int m, int j) { return b.alpha(m - 1, j - 1).evaluate(h); };
  auto V = [&](int p, int q) { return data.at(p, q).evaluate(h); };
  const Complex G = b.alpha.order(0)(k - 1, k - 1);
  double sum_v1 = 0.0;
  Complex cross_k = 0.0, cross_kp = 0.0;
  for (int p = 1; p <= n; ++p) {
    cross_k += beta1(p - 1, k - 1) * V1(p - 1, k - 1);
    cross_kp += beta1(p - 1, k - 1) * V1(p - 1, kp - 1);
    for (int q = 1; q <= n; ++q) sum_v1 += std::norm(V1(p - 1, q - 1));
  }
  const double h2 = h * h;
  const Complex psi10 = std::conj(alpha(k, k)) + h2 * cross_k - 0.25 * std::conj(G) * sum_v1 * h2;
  const Complex psi01 = std::conj(alpha(kp, k)) + h2 * cross_kp;
  const Complex psi21 = std::sqrt(2.0) * std::conj(alpha(k, k)) * V(k, kp) +
                        std::conj(alpha(kp, k)) * V(k, k) / std::sqrt(2.0);
  double d11 = 0, d00 = 0, d20 = 0;
  Complex z = 0.0;
  for (int q = 1; q <= n; ++q) {
    if (q == k || q == kp) continue;
    d11 += std::norm(V1(kp - 1, q - 1));
    d00 += std::norm(a1(q - 1, k - 1));
    d20 += 2.0 * std::norm(V1(k - 1, q - 1));
    z += std::conj(a1(q - 1, k - 1)) * std::conj(std::sqrt(2.0) * std::conj(G) * V1(k - 1, q - 1));
  }
  // Basis (1,1), (0,0), (2,0) of the partial transpose.
  Eigen::Matrix3cd m;
  const Complex x = psi10 * std::conj(psi01);
  const Complex y = psi10 * std::conj(psi21);
  m << h2 * d11, x, y,
       std::conj(x), h2 * d00, h2 * z,
       std::conj(y), std::conj(h2 * z), h2 * d20;
  const double lead = std::sqrt(std::norm(a1(kp - 1, k - 1)) + 2.0 * std::norm(V1(k - 1, kp - 1)));
  out.push_back({"mu8", smallest_root(m), 1, -lead});
  return out;
}

std::vector<ClosedFormEigenvalue> fermion_forms(const FermionBogoliubov& f,
                                                const PairCase& c, double h) {
  const LeadingOrderSums sums(f);
  const auto data = fermion_vacuum_data(f);
  const int k = c.mode_a, kb = c.mode_b;
  auto A = [&](int m, int j) { return f.A(f.index(m), f.index(j)); };
  std::vector<ClosedFormEigenvalue> out;
  switch (c.state) {
    case InStateKind::vacuum:
      if (k < 0 || kb >= 0) return out;
      out.push_back(two_level("nu3", h, sums.fbar_A(k, kb), sums.f_A(kb, k), data.at(k, kb)));
      return out;
    case InStateKind::one_particle: {
      if (kb < 0) return out;  // Pauli blocked: no negative eigenvalue to O(h^2)
      H2Series x = A(kb, k).conj();
      for (int q = -f.n_max; q < 0; ++q) x -= data.at(kb, q) * A(q, k).conj();
      out.push_back(two_level("nu3", h, sums.f_A(k, kb), sums.fbar_A(kb), x));
      return out;
    }
    case InStateKind::pair: {
      H2Series y;
      for (int m = -f.n_max; m < 0; ++m) y += A(m, k).conj() * A(m, kb);
      out.push_back(two_level("nu3", h, sums.f_A(k), sums.fbar_A(kb), y));
      return out;
    }
  }
  return out;
}

}  // namespace

std::vector<ClosedFormEigenvalue> closed_form_eigenvalues(const Bogoliubov& b,
                                                          const PairCase& c,
                                                          double h) {
  if (const auto* bb = std::get_if<BosonBogoliubov>(&b)) {
    if (c.species != Species::boson) throw ContractViolation("species mismatch");
    c.validate(bb->n_max());
    return boson_forms(*bb, c, h);
  }
  const auto& f = std::get<FermionBogoliubov>(b);
  if (c.species != Species::fermion) throw ContractViolation("species mismatch");
  c.validate(f.n_max);
  return fermion_forms(f, c, h);
}

std::optional<double> closed_form_negativity(
    const std::vector<ClosedFormEigenvalue>& values) {
  if (values.empty()) return std::nullopt;
  double n = 0.0;
  for (const auto& v : values) n += std::max(0.0, -v.value);
  return n;
}

// ------------------------------------------------------------ analysis

ReducedDensityMatrix reduced_state(const Bogoliubov& b, const PairCase& c,
                                   bool focus, FermionOrdering ordering) {
  ExpansionOptions opts;
  if (focus) opts.focus = std::make_pair(c.mode_a, c.mode_b);
  opts.ordering = ordering;
  if (const auto* bb = std::get_if<BosonBogoliubov>(&b)) {
    if (c.species != Species::boson) throw ContractViolation("species mismatch");
    c.validate(bb->n_max());
    const auto data = boson_vacuum_data(*bb);
    const auto psi = c.state == InStateKind::vacuum
                         ? boson_vacuum_expansion(data, opts)
                         : boson_one_particle_expansion(*bb, data, c.mode_a, opts);
    return reduce_to_pair(psi, c.mode_a, c.mode_b);
  }
  const auto& f = std::get<FermionBogoliubov>(b);
  if (c.species != Species::fermion) throw ContractViolation("species mismatch");
  c.validate(f.n_max);
  const auto data = fermion_vacuum_data(f);
  FermionInState in = FermionInState::vacuum();
  if (c.state == InStateKind::one_particle) in = FermionInState::one_particle(c.mode_a);
  if (c.state == InStateKind::pair) in = FermionInState::pair(c.mode_a, c.mode_b);
  return reduce_to_pair(fermion_state_expansion(f, data, in, opts), c.mode_a, c.mode_b);
}

NegativityReport analyze(const Bogoliubov& b, const PairCase& c,
                         const AnalysisOptions& opts) {
  NegativityReport r;
  r.pair = c;
  r.h = opts.h;
  const auto rho = reduced_state(b, c, opts.focus, opts.ordering);
  r.dropped_keys = rho.dropped;
  for (int k = 1; k < 3; ++k) {
    r.trace_defect += std::abs(rho.rho.order(k).trace());
  }
  const auto pt = partial_transpose(rho);
  const auto eig = pt_eigenvalues(pt, opts.h);
  r.pt_eigenvalues.assign(eig.data(), eig.data() + eig.size());
  r.negativity = negativity_numeric(pt, opts.h);
  try {
    r.leading = leading_order(pt, opts.probes);
  } catch (const DiagnosticError&) {
    // Near an isolated zero of the O(h) coefficient neither power dominates
    // at any probe; fall back on the perturbative coefficients.
    const auto c2 = perturbative_coefficients(pt);
    r.leading = LeadingOrder{};
    r.leading.ambiguous = true;
    if (c2[0] > 0.0) {
      r.leading.power = 1;
      r.leading.coefficient = c2[0];
    } else if (c2[1] > 0.0) {
      r.leading.power = 2;
      r.leading.coefficient = c2[1];
    } else {
      r.leading.zero = true;
    }
  }
  if (opts.closed_forms) r.closed_form = closed_form_eigenvalues(b, c, opts.h);
  return r;
}

}  // namespace cavent
