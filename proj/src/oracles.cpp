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

#include "cavent/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <Eigen/IterativeLinearSolvers>

#include "cavent/errors.hpp"

namespace cavent::oracles {

namespace {
constexpr int kGaussOrder = 30;
constexpr double kPi = std::numbers::pi;
}  // namespace

QuadratureRule QuadratureRule::composite(int panels) {
  using Gauss = boost::math::quadrature::gauss<double, kGaussOrder>;
  const auto& x = Gauss::abscissa();
  const auto& w = Gauss::weights();
  QuadratureRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * kGaussOrder);
  rule.weights.reserve(rule.nodes.capacity());
  const double width = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * width;
    for (std::size_t i = 0; i < x.size(); ++i) {
      // Even order: every tabulated abscissa is strictly positive.
      for (double sign : {-1.0, 1.0}) {
        rule.nodes.push_back(mid + sign * 0.5 * width * x[i]);
        rule.weights.push_back(0.5 * width * w[i]);
      }
    }
  }
  return rule;
}

int default_panels(int n_max) { return std::max(32, 2 * n_max); }

double JunctionSlice::rindler_fraction(double s) const {
  if (h == 0.0) return s;
  return std::log1p(h * s / (1.0 - 0.5 * h)) / (2.0 * std::atanh(0.5 * h));
}

double JunctionSlice::scaled_position(double s) const {
  if (h == 0.0) return 1.0;
  return (2.0 * std::atanh(0.5 * h) / h) * (1.0 + h * (s - 0.5));
}

BosonOverlap boson_overlap(double h, int n_max, const QuadratureRule& rule) {
  if (n_max <= 0) throw ContractViolation("boson_overlap: n_max must be > 0");
  if (!(std::abs(h) < 2.0)) {
    throw ContractViolation("boson_overlap: walls straddle the horizon");
  }
  const JunctionSlice slice{h};
  const auto q = static_cast<Eigen::Index>(rule.size());
  // Rows: mode index; columns: quadrature nodes.
  Eigen::MatrixXd inertial(n_max, q), accelerated(n_max, q);
  Eigen::VectorXd w(q), w_over_x(q);
  for (Eigen::Index j = 0; j < q; ++j) {
    const double s = rule.nodes[j];
    const double r = slice.rindler_fraction(s);
    w(j) = rule.weights[j];
    w_over_x(j) = rule.weights[j] / slice.scaled_position(s);
    for (int n = 1; n <= n_max; ++n) {
      inertial(n - 1, j) = std::sin(n * kPi * s);
      accelerated(n - 1, j) = std::sin(n * kPi * r);
    }
  }
  // Klein-Gordon products on the shared slice:
  //   alpha_mn = (mn)^(-1/2) int sin(n pi s) sin(m pi r) (m / x~ + n) ds
  //   beta_mn  = (mn)^(-1/2) int sin(n pi s) sin(m pi r) (n - m / x~) ds
  const Eigen::MatrixXd by_x = accelerated * w_over_x.asDiagonal() * inertial.transpose();
  const Eigen::MatrixXd plain = accelerated * w.asDiagonal() * inertial.transpose();
  BosonOverlap out{Eigen::MatrixXd(n_max, n_max), Eigen::MatrixXd(n_max, n_max)};
  for (int m = 1; m <= n_max; ++m) {
    for (int n = 1; n <= n_max; ++n) {
      const double norm = 1.0 / std::sqrt(double(m) * n);
      out.alpha(m - 1, n - 1) = norm * (m * by_x(m - 1, n - 1) + n * plain(m - 1, n - 1));
      out.beta(m - 1, n - 1) = norm * (n * plain(m - 1, n - 1) - m * by_x(m - 1, n - 1));
    }
  }
  return out;
}

Eigen::MatrixXd fermion_overlap(double h, int n_max,
                                const QuadratureRule& rule) {
  if (n_max < 0) throw ContractViolation("fermion_overlap: n_max must be >= 0");
  if (!(std::abs(h) < 2.0)) {
    throw ContractViolation("fermion_overlap: walls straddle the horizon");
  }
  const JunctionSlice slice{h};
  const int size = 2 * n_max + 1;
  const auto q = static_cast<Eigen::Index>(rule.size());
  Eigen::MatrixXd cos_in(size, q), sin_in(size, q), cos_acc(size, q),
      sin_acc(size, q);
  Eigen::VectorXd w(q);
  for (Eigen::Index j = 0; j < q; ++j) {
    const double s = rule.nodes[j];
    const double r = slice.rindler_fraction(s);
    // Conformal weight of the spinor: |psi~|^2 dx carries 1/x.
    w(j) = rule.weights[j] / std::sqrt(slice.scaled_position(s));
    for (int i = 0; i < size; ++i) {
      const double freq = (i - n_max + 0.5) * kPi;
      cos_in(i, j) = std::cos(freq * s);
      sin_in(i, j) = std::sin(freq * s);
      cos_acc(i, j) = std::cos(freq * r);
      sin_acc(i, j) = std::sin(freq * r);
    }
  }
  // A_mn = int cos(Omega_m r - omega_n s) / sqrt(x~) ds
  return cos_acc * w.asDiagonal() * cos_in.transpose() +
         sin_acc * w.asDiagonal() * sin_in.transpose();
}

std::vector<double> default_ladder(int n_max) {
  const double top = std::min(0.08, 3.2 / std::max(n_max, 1));
  return {top, top / 2, top / 4, top / 8};
}

std::vector<double> symmetric_ladder(std::span<const double> ladder) {
  std::vector<double> out;
  for (double h : ladder) {
    out.push_back(h);
    out.push_back(-h);
  }
  return out;
}

SeriesFit extract_orders(std::span<const OrderSample> samples, int max_degree) {
  if (samples.empty()) throw ContractViolation("extract_orders: no samples");
  const Eigen::Index rows = samples.front().value.rows();
  const Eigen::Index cols = samples.front().value.cols();
  const OrderSample* pinned = nullptr;
  std::vector<const OrderSample*> fitted;
  double scale = 0.0;
  for (const auto& s : samples) {
    if (s.value.rows() != rows || s.value.cols() != cols) {
      throw ContractViolation("extract_orders: sample shapes differ");
    }
    if (s.h == 0.0) {
      pinned = &s;
      continue;
    }
    fitted.push_back(&s);
    scale = std::max(scale, std::abs(s.h));
  }
  // Without a pinned sample the constant term is one more unknown.
  const int first = pinned ? 1 : 0;
  const auto n = static_cast<Eigen::Index>(fitted.size());
  const int degree = static_cast<int>(std::min<Eigen::Index>(n - 1 + first, max_degree));
  if (degree < 2) throw ContractViolation("extract_orders: too few samples");

  Eigen::MatrixXd vander(n, degree + 1 - first);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = fitted[i]->h / scale;
    double p = first ? t : 1.0;
    for (int k = first; k <= degree; ++k, p *= t) vander(i, k - first) = p;
  }
  // Rows of `solve` map the sample vector to the scaled coefficients.
  const Eigen::MatrixXd solve =
      vander.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(n, n));

  std::array<ComplexMatrix, 3> orders;
  for (int k = 0; k < 3; ++k) {
    orders[k] = ComplexMatrix::Zero(rows, cols);
    if (k < first) {
      orders[k] = pinned->value;
      continue;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const ComplexMatrix shifted =
          pinned ? ComplexMatrix(fitted[i]->value - pinned->value) : fitted[i]->value;
      orders[k] += solve(k - first, i) * shifted;
    }
    orders[k] /= std::pow(scale, k);
  }

  SeriesFit fit{SeriesMatrix(std::move(orders)), {}, {}, degree};
  double cubic_scale = 0.0;
  for (const auto* s : fitted) {
    const double r = (s->value - fit.series.evaluate(s->h)).cwiseAbs().maxCoeff();
    fit.sample_h.push_back(s->h);
    fit.residual.push_back(r);
    if (std::abs(s->h) == scale) cubic_scale = std::max(cubic_scale, r / std::pow(scale, 3));
  }
  for (std::size_t i = 0; i < fit.residual.size(); ++i) {
    const double bound = 2.0 * cubic_scale * std::pow(std::abs(fit.sample_h[i]), 3) + 1e-11;
    if (fit.residual[i] > bound) {
      throw DiagnosticError("extract_orders: residual does not fall off as h^3",
                            fit.residual[i]);
    }
  }
  return fit;
}

// --------------------------------------------------------------------------

namespace {
constexpr int kBitsPerMode = 4;

void enumerate(std::size_t pos, std::size_t n_modes, int cap, int left,
               std::vector<int>& occ, const std::function<void()>& emit) {
  if (pos == n_modes) {
    emit();
    return;
  }
  for (int k = 0; k <= std::min(cap, left); ++k) {
    occ[pos] = k;
    enumerate(pos + 1, n_modes, cap, left - k, occ, emit);
  }
  occ[pos] = 0;
}
}  // namespace

FockSpace FockSpace::bosonic(std::vector<int> modes, int cap, int max_quanta) {
  if (modes.size() * kBitsPerMode > 64 || cap >= (1 << kBitsPerMode) || cap < 1) {
    throw ContractViolation("FockSpace: window or cap too large for packing");
  }
  FockSpace space;
  space.cap_ = cap;
  space.modes_ = std::move(modes);
  std::vector<int> occ(space.modes_.size(), 0);
  enumerate(0, occ.size(), cap, max_quanta, occ,
            [&] { space.keys_.push_back(space.pack(occ)); });
  std::sort(space.keys_.begin(), space.keys_.end());
  return space;
}

FockSpace FockSpace::fermionic(std::vector<int> modes, int max_quanta) {
  if (modes.size() > 64) throw ContractViolation("FockSpace: window too large");
  if (!std::is_sorted(modes.begin(), modes.end())) {
    throw ContractViolation("FockSpace: fermionic modes must be ascending");
  }
  FockSpace space;
  space.fermionic_ = true;
  space.cap_ = 1;
  space.modes_ = std::move(modes);
  std::vector<int> occ(space.modes_.size(), 0);
  enumerate(0, occ.size(), 1, max_quanta, occ,
            [&] { space.keys_.push_back(space.pack(occ)); });
  std::sort(space.keys_.begin(), space.keys_.end());
  return space;
}

std::uint64_t FockSpace::pack(const std::vector<int>& occ) const {
  std::uint64_t key = 0;
  const int bits = fermionic_ ? 1 : kBitsPerMode;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    key |= static_cast<std::uint64_t>(occ[i]) << (bits * i);
  }
  return key;
}

int FockSpace::occupation(std::size_t state, std::size_t mode_pos) const {
  const int bits = fermionic_ ? 1 : kBitsPerMode;
  return static_cast<int>((keys_[state] >> (bits * mode_pos)) & ((1u << bits) - 1));
}

std::size_t FockSpace::mode_position(int mode) const {
  const auto it = std::find(modes_.begin(), modes_.end(), mode);
  if (it == modes_.end()) throw ContractViolation("FockSpace: mode outside window");
  return static_cast<std::size_t>(it - modes_.begin());
}

std::int64_t FockSpace::find(const std::vector<int>& occ) const {
  if (occ.size() != modes_.size()) return -1;
  for (int o : occ) {
    if (o < 0 || o > cap_) return -1;
  }
  const auto key = pack(occ);
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) return -1;
  return it - keys_.begin();
}

std::vector<int> FockSpace::occupations(std::size_t state) const {
  std::vector<int> occ(modes_.size());
  for (std::size_t i = 0; i < occ.size(); ++i) occ[i] = occupation(state, i);
  return occ;
}

FockSpace::Sparse FockSpace::annihilator(std::size_t pos) const {
  std::vector<Eigen::Triplet<Complex>> entries;
  for (std::size_t s = 0; s < keys_.size(); ++s) {
    auto occ = occupations(s);
    const int n = occ[pos];
    if (n == 0) continue;
    double factor = std::sqrt(double(n));
    if (fermionic_) {
      int before = 0;
      for (std::size_t i = 0; i < pos; ++i) before += occ[i];
      factor = (before % 2) ? -1.0 : 1.0;
    }
    occ[pos] -= 1;
    const auto target = find(occ);
    if (target >= 0) entries.emplace_back(target, s, factor);
  }
  Sparse m(dimension(), dimension());
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

Complex OracleState::amplitude(const FockSpace& space,
                               const std::vector<int>& occ) const {
  const auto i = space.find(occ);
  return i < 0 ? Complex() : amplitudes(i);
}

namespace {

using Sparse = FockSpace::Sparse;

std::vector<Sparse> annihilators(const FockSpace& space) {
  std::vector<Sparse> out;
  for (std::size_t p = 0; p < space.modes().size(); ++p) {
    out.push_back(space.annihilator(p));
  }
  return out;
}

// Ground state of sum_n L_n^+ L_n with the empty-state amplitude pinned to 1.
OracleState annihilated_state(const FockSpace& space,
                              const std::vector<Sparse>& lowering) {
  const auto d = static_cast<Eigen::Index>(space.dimension());
  Sparse H(d, d);
  for (const auto& l : lowering) H += Sparse(l.adjoint()) * l;
  H.prune(Complex(0.0));
  // Index 0 is the empty configuration (smallest packed key).
  const Sparse Hrr = H.bottomRightCorner(d - 1, d - 1);
  const ComplexVector rhs = -ComplexVector(H.col(0)).tail(d - 1);
  Eigen::ConjugateGradient<Sparse, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(1e-15);
  cg.setMaxIterations(2000);
  cg.compute(Hrr);
  const ComplexVector x = cg.solve(rhs);
  if (cg.info() != Eigen::Success && cg.error() > 1e-12) {
    throw DiagnosticError("fock_vacuum: linear solve did not converge", cg.error());
  }
  OracleState out;
  out.amplitudes.resize(d);
  out.amplitudes(0) = 1.0;
  out.amplitudes.tail(d - 1) = x;
  out.amplitudes.normalize();
  out.residual = std::abs(out.amplitudes.dot(H * out.amplitudes));
  return out;
}

void check_window(const FockSpace& space, const ComplexMatrix& m,
                  const char* what) {
  const auto w = static_cast<Eigen::Index>(space.modes().size());
  if (m.rows() != w || m.cols() != w) {
    throw ContractViolation(std::string(what) + ": matrix does not match window");
  }
}

}  // namespace

OracleState fock_vacuum(const FockSpace& space, const ComplexMatrix& alpha,
                        const ComplexMatrix& beta) {
  if (space.fermionic()) throw ContractViolation("fock_vacuum: bosonic space expected");
  check_window(space, alpha, "fock_vacuum");
  check_window(space, beta, "fock_vacuum");
  const auto out = annihilators(space);
  std::vector<Sparse> in;
  for (Eigen::Index n = 0; n < alpha.cols(); ++n) {
    Sparse a(space.dimension(), space.dimension());
    for (Eigen::Index m = 0; m < alpha.rows(); ++m) {
      a += alpha(m, n) * out[m] + std::conj(beta(m, n)) * Sparse(out[m].adjoint());
    }
    in.push_back(std::move(a));
  }
  return annihilated_state(space, in);
}

namespace {
// b_n (kappa_n >= 0) or c_n (kappa_n < 0) as sparse matrices.
std::vector<Sparse> fermion_in_annihilators(const FockSpace& space,
                                            const ComplexMatrix& A) {
  const auto out = annihilators(space);
  const auto& modes = space.modes();
  std::vector<Sparse> in;
  for (std::size_t n = 0; n < modes.size(); ++n) {
    Sparse op(space.dimension(), space.dimension());
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const Sparse lower = out[m];
      const Sparse raise = Sparse(out[m].adjoint());
      if (modes[n] >= 0) {
        op += A(m, n) * (modes[m] >= 0 ? lower : raise);
      } else {
        op += std::conj(A(m, n)) * (modes[m] >= 0 ? raise : lower);
      }
    }
    in.push_back(std::move(op));
  }
  return in;
}
}  // namespace

OracleState fock_vacuum(const FockSpace& space, const ComplexMatrix& A) {
  if (!space.fermionic()) throw ContractViolation("fock_vacuum: fermionic space expected");
  check_window(space, A, "fock_vacuum");
  return annihilated_state(space, fermion_in_annihilators(space, A));
}

OracleState fock_apply_instate(const FockSpace& space, const OracleState& vac,
                               const ComplexMatrix& alpha,
                               const ComplexMatrix& beta, int k) {
  check_window(space, alpha, "fock_apply_instate");
  const auto out = annihilators(space);
  const auto kp = static_cast<Eigen::Index>(space.mode_position(k));
  Sparse create(space.dimension(), space.dimension());
  for (Eigen::Index m = 0; m < alpha.rows(); ++m) {
    create += std::conj(alpha(m, kp)) * Sparse(out[m].adjoint()) + beta(m, kp) * out[m];
  }
  OracleState s{create * vac.amplitudes, vac.residual};
  s.amplitudes.normalize();
  return s;
}

OracleState fock_apply_instate(const FockSpace& space, const OracleState& vac,
                               const ComplexMatrix& A, int kappa) {
  if (kappa < 0) throw ContractViolation("one-particle state needs kappa >= 0");
  check_window(space, A, "fock_apply_instate");
  const auto in = fermion_in_annihilators(space, A);
  OracleState s{Sparse(in[space.mode_position(kappa)].adjoint()) * vac.amplitudes,
                vac.residual};
  s.amplitudes.normalize();
  return s;
}

OracleState fock_apply_instate(const FockSpace& space, const OracleState& vac,
                               const ComplexMatrix& A, int kappa,
                               int kappa_prime) {
  if (kappa < 0 || kappa_prime >= 0) {
    throw ContractViolation("pair state needs kappa >= 0 and kappa' < 0");
  }
  check_window(space, A, "fock_apply_instate");
  const auto in = fermion_in_annihilators(space, A);
  const Sparse b_dag = in[space.mode_position(kappa)].adjoint();
  const Sparse c_dag = in[space.mode_position(kappa_prime)].adjoint();
  OracleState s{b_dag * (c_dag * vac.amplitudes), vac.residual};
  s.amplitudes.normalize();
  return s;
}

ComplexMatrix reduced_pair(const FockSpace& space, const OracleState& psi,
                           int mode_a, int mode_b, int cap) {
  const auto pa = space.mode_position(mode_a);
  const auto pb = space.mode_position(mode_b);
  if (pa == pb) throw ContractViolation("reduced_pair: modes must differ");
  const int dim = cap + 1;
  std::map<std::vector<int>, std::vector<std::pair<int, Complex>>> by_rest;
  for (std::size_t s = 0; s < space.dimension(); ++s) {
    const Complex amp = psi.amplitudes(s);
    if (amp == Complex()) continue;
    auto occ = space.occupations(s);
    const int na = occ[pa], nb = occ[pb];
    if (na > cap || nb > cap) {
      if (std::abs(amp) > 1e-12) {
        throw ContractViolation("reduced_pair: occupation above cap");
      }
      continue;
    }
    double sign = 1.0;
    if (space.fermionic()) {
      // Reorder so the creators of a, then b, stand first.
      int swaps = 0;
      for (std::size_t i = 0; i < occ.size(); ++i) {
        if (i < pa) swaps += na * occ[i];
        if (i < pb && i != pa) swaps += nb * occ[i];
      }
      sign = swaps % 2 ? -1.0 : 1.0;
    }
    occ[pa] = occ[pb] = 0;
    by_rest[occ].emplace_back(na * dim + nb, sign * amp);
  }
  ComplexMatrix rho = ComplexMatrix::Zero(dim * dim, dim * dim);
  for (const auto& [rest, entries] : by_rest) {
    for (const auto& [i, ai] : entries) {
      for (const auto& [j, aj] : entries) rho(i, j) += ai * std::conj(aj);
    }
  }
  return rho;
}

}  // namespace cavent::oracles
