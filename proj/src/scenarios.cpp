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

#include "cavent/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "cavent/errors.hpp"
#include "cavent/oracles.hpp"
#include "preset_data.hpp"

namespace cavent {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string where(int line) { return "line " + std::to_string(line) + ": "; }

double to_double(std::string_view v, const std::string& ctx) {
  v = trim(v);
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x)) {
    throw ConfigError(ctx + "not a number: '" + std::string(v) + "'");
  }
  return x;
}

int to_int(std::string_view v, const std::string& ctx) {
  v = trim(v);
  int x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError(ctx + "not an integer: '" + std::string(v) + "'");
  }
  return x;
}

bool to_bool(std::string_view v, const std::string& ctx) {
  v = trim(v);
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError(ctx + "not a boolean: '" + std::string(v) + "'");
}

std::vector<std::string_view> split(std::string_view v, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto p = v.find(sep);
    out.push_back(trim(v.substr(0, p)));
    if (p == std::string_view::npos) break;
    v.remove_prefix(p + 1);
  }
  return out;
}

Species parse_species(std::string_view v, const std::string& ctx) {
  if (v == "boson") return Species::boson;
  if (v == "fermion") return Species::fermion;
  throw ConfigError(ctx + "species must be boson or fermion");
}

InStateKind parse_state(std::string_view v, const std::string& ctx) {
  if (v == "vacuum") return InStateKind::vacuum;
  if (v == "one_particle") return InStateKind::one_particle;
  if (v == "pair") return InStateKind::pair;
  throw ConfigError(ctx + "state must be vacuum, one_particle or pair");
}

std::string default_id(const PairCase& p) {
  return std::string(to_string(p.species)) + "-" + to_string(p.state) + "-" +
         std::to_string(p.mode_a) + "_" + std::to_string(p.mode_b);
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

struct CurveDraft {
  CurveSpec spec;
  bool has_species = false, has_state = false, has_modes = false;
  int line = 0;
};

CurveSpec finish(const CurveDraft& d) {
  const auto ctx = where(d.line);
  if (!d.has_species || !d.has_state || !d.has_modes) {
    throw ConfigError(ctx + "[curve] needs species, state and modes");
  }
  CurveSpec c = d.spec;
  if (c.id.empty()) c.id = default_id(c.pair);
  return c;
}

}  // namespace

const char* version() { return CAVENT_VERSION; }

// ----------------------------------------------------------------- request

std::vector<double> SweepRequest::grid() const {
  std::vector<double> g;
  if (steps < 1) return g;
  if (steps == 1) return {u_start};
  g.reserve(static_cast<std::size_t>(steps));
  const double du = (u_stop - u_start) / (steps - 1);
  for (int i = 0; i < steps; ++i) {
    g.push_back(i + 1 == steps ? u_stop : u_start + i * du);
  }
  return g;
}

void SweepRequest::validate() const {
  if (steps < 2) throw ConfigError("steps must be >= 2");
  if (!(u_stop > u_start)) throw ConfigError("u_stop must exceed u_start");
  if (!(h > 0.0 && h < 0.5)) throw ConfigError("h must lie in (0, 0.5)");
  if (n_max < 4) throw ConfigError("n_max must be >= 4");
  if (format != "csv" && format != "json") {
    throw ConfigError("format must be csv or json");
  }
  if (!(convergence_gate > 0.0)) throw ConfigError("convergence_gate must be positive");
  for (double p : probes) {
    if (!(p > 0.0 && p < 0.5)) throw ConfigError("probes must lie in (0, 0.5)");
  }
  if (!probes.empty() && probes.size() < 2) throw ConfigError("need at least two probes");
  if (curves.empty()) throw ConfigError("no curves");
  std::set<std::string> ids;
  for (const auto& c : curves) {
    if (!ids.insert(c.id).second) throw ConfigError("duplicate curve id '" + c.id + "'");
    if (c.power < 0 || c.power > 2) {
      throw ConfigError("curve '" + c.id + "': power must be 0 (auto), 1 or 2");
    }
    try {
      c.pair.validate(n_max);
    } catch (const ContractViolation& e) {
      throw ConfigError("curve '" + c.id + "': " + e.what());
    }
  }
}

std::string SweepRequest::canonical() const {
  std::ostringstream o;
  o << "n_max = " << n_max << "\n"
    << "steps = " << steps << "\n"
    << "u_start = " << fmt17(u_start) << "\n"
    << "u_stop = " << fmt17(u_stop) << "\n"
    << "h = " << fmt17(h) << "\n";
  if (!probes.empty()) {
    o << "probes = ";
    for (std::size_t i = 0; i < probes.size(); ++i) {
      o << (i ? ", " : "") << fmt17(probes[i]);
    }
    o << "\n";
  }
  o << "format = " << format << "\n"
    << "convergence_gate = " << fmt17(convergence_gate) << "\n"
    << "convergence_check = " << (convergence_check ? "true" : "false") << "\n";
  for (const auto& c : curves) {
    o << "\n[curve]\n"
      << "id = " << c.id << "\n"
      << "species = " << to_string(c.pair.species) << "\n"
      << "state = " << to_string(c.pair.state) << "\n"
      << "modes = " << c.pair.mode_a << ", " << c.pair.mode_b << "\n"
      << "power = " << c.power << "\n";
  }
  return o.str();
}

SweepRequest parse_config(std::string_view text) {
  SweepRequest r;
  std::vector<CurveDraft> drafts;
  bool seen_key = false;
  bool named = false;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const auto ctx = where(line_no);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line != "[curve]") throw ConfigError(ctx + "unknown section " + std::string(line));
      drafts.push_back({});
      drafts.back().line = line_no;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(ctx + "expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError(ctx + "empty value for " + std::string(key));

    if (!drafts.empty()) {
      auto& d = drafts.back();
      if (key == "id") {
        d.spec.id = std::string(value);
      } else if (key == "species") {
        d.spec.pair.species = parse_species(value, ctx);
        d.has_species = true;
      } else if (key == "state") {
        d.spec.pair.state = parse_state(value, ctx);
        d.has_state = true;
      } else if (key == "modes") {
        const auto parts = split(value, ',');
        if (parts.size() != 2) throw ConfigError(ctx + "modes takes two labels");
        d.spec.pair.mode_a = to_int(parts[0], ctx);
        d.spec.pair.mode_b = to_int(parts[1], ctx);
        d.has_modes = true;
      } else if (key == "power") {
        d.spec.power = value == "auto" ? 0 : to_int(value, ctx);
      } else {
        throw ConfigError(ctx + "unknown curve key '" + std::string(key) + "'");
      }
      continue;
    }

    if (key == "preset") {
      if (seen_key) throw ConfigError(ctx + "preset must come first");
      r = preset(value);
      named = true;
    } else if (key == "n_max") {
      r.n_max = to_int(value, ctx);
    } else if (key == "steps") {
      r.steps = to_int(value, ctx);
    } else if (key == "u_start") {
      r.u_start = to_double(value, ctx);
    } else if (key == "u_stop") {
      r.u_stop = to_double(value, ctx);
    } else if (key == "h") {
      r.h = to_double(value, ctx);
    } else if (key == "probes") {
      r.probes.clear();
      for (auto p : split(value, ',')) r.probes.push_back(to_double(p, ctx));
    } else if (key == "format") {
      r.format = std::string(value);
    } else if (key == "convergence_gate") {
      r.convergence_gate = to_double(value, ctx);
    } else if (key == "convergence_check") {
      r.convergence_check = to_bool(value, ctx);
    } else {
      throw ConfigError(ctx + "unknown key '" + std::string(key) + "'");
    }
    seen_key = true;
  }
  if (!drafts.empty()) {
    r.curves.clear();
    for (const auto& d : drafts) r.curves.push_back(finish(d));
    if (!named) r.name = "custom";
  }
  r.warnings.clear();
  for (const auto& c : r.curves) {
    const auto& p = c.pair;
    if (p.species == Species::fermion && p.state == InStateKind::one_particle &&
        (p.mode_a >= 0) != (p.mode_b >= 0)) {
      r.warnings.push_back("curve '" + c.id +
                           "': opposite-charge pair for a one-particle state; "
                           "the negativity is zero");
    }
  }
  r.validate();
  return r;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : detail::kPresets) out.emplace_back(p.name);
  return out;
}

std::string preset_text(std::string_view name) {
  for (const auto& p : detail::kPresets) {
    if (name == p.name) return p.text;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

SweepRequest preset(std::string_view name) {
  auto r = parse_config(preset_text(name));
  r.name = std::string(name);
  return r;
}

// ------------------------------------------------------------------- sweep

bool SweepResult::converged() const {
  return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.converged; });
}

SweepRow evaluate_point(const Bogoliubov& transformation, const PairCase& pair,
                        double u, double h, const std::vector<double>& probes,
                        int power) {
  AnalysisOptions opts;
  opts.h = h;
  opts.probes = probes;
  opts.closed_forms = false;
  const auto rep = analyze(transformation, pair, opts);
  SweepRow row;
  row.u = u;
  row.negativity = rep.negativity;
  row.ambiguous = rep.leading.ambiguous;
  row.leading_power = rep.leading.zero ? 0 : rep.leading.power;
  row.coefficient = rep.leading.zero ? 0.0 : rep.leading.coefficient;
  row.power = power > 0 ? power : std::max(row.leading_power, 1);
  row.value = rep.negativity / std::pow(h, row.power);
  return row;
}

namespace {

// Runs fn(i) for i in [0, n) on a small pool; the first exception wins.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

Bogoliubov transformation_at(Species s, double h, double u, int n_max,
                             const CacheOptions& cache) {
  return assemble(s, TravelScenario::single_segment(h, u), n_max, cache);
}

}  // namespace

SweepResult run_sweep(const SweepRequest& request, const RunOptions& opts) {
  request.validate();
  SweepResult result;
  result.request = request;
  result.config_hash = fnv1a(request.canonical());

  const auto u = request.grid();
  const auto& curves = request.curves;
  const std::size_t nc = curves.size();
  bool species_used[2] = {false, false};
  for (const auto& c : curves) species_used[static_cast<int>(c.pair.species)] = true;

  // Build (or load) the junctions up front so workers only read the cache.
  const CavityGeometry geom{1.0, request.h};
  if (species_used[0]) boson_building_block(geom, request.n_max, opts.cache);
  if (species_used[1]) fermion_building_block(geom, request.n_max, 0.0, opts.cache);

  std::vector<SweepRow> rows(u.size() * nc);
  parallel_for(u.size(), opts.threads, [&](std::size_t i) {
    std::optional<Bogoliubov> t[2];
    for (int s = 0; s < 2; ++s) {
      if (species_used[s]) {
        t[s] = transformation_at(static_cast<Species>(s), request.h, u[i], request.n_max, opts.cache);
      }
    }
    for (std::size_t c = 0; c < nc; ++c) {
      auto row = evaluate_point(*t[static_cast<int>(curves[c].pair.species)], curves[c].pair,
                                u[i], request.h, request.probes, curves[c].power);
      row.curve = c;
      rows[i * nc + c] = row;
    }
  });

  // Fix the normalization of auto curves to the most common detected power.
  std::vector<int> power(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    power[c] = curves[c].power;
    if (power[c] > 0) continue;
    int count[3] = {0, 0, 0};
    for (std::size_t i = 0; i < u.size(); ++i) ++count[rows[i * nc + c].leading_power];
    power[c] = count[2] > count[1] ? 2 : 1;
  }
  for (auto& row : rows) {
    row.power = power[row.curve];
    row.value = row.negativity / std::pow(request.h, row.power);
  }

  if (request.convergence_check) {
    const int doubled = 2 * request.n_max;
    if (species_used[0]) boson_building_block(geom, doubled, opts.cache);
    if (species_used[1]) fermion_building_block(geom, doubled, 0.0, opts.cache);
    std::vector<std::size_t> picks;
    const double last = static_cast<double>(u.size() - 1);
    for (double f : {0.25, 0.5, 0.75}) {
      const auto i = static_cast<std::size_t>(std::lround(f * last));
      if (std::find(picks.begin(), picks.end(), i) == picks.end()) picks.push_back(i);
    }
    result.spot_checks.resize(picks.size() * nc);
    parallel_for(picks.size(), opts.threads, [&](std::size_t k) {
      const std::size_t i = picks[k];
      std::optional<Bogoliubov> t[2];
      for (int s = 0; s < 2; ++s) {
        if (species_used[s]) {
          t[s] = transformation_at(static_cast<Species>(s), request.h, u[i], doubled, opts.cache);
        }
      }
      for (std::size_t c = 0; c < nc; ++c) {
        const auto& base = rows[i * nc + c];
        const auto again = evaluate_point(*t[static_cast<int>(curves[c].pair.species)],
                                          curves[c].pair, u[i], request.h,
                                          request.probes, power[c]);
        SpotCheck sc;
        sc.curve = c;
        sc.u = u[i];
        sc.value = base.value;
        sc.doubled = again.value;
        const double scale = std::max(std::abs(sc.value), std::abs(sc.doubled));
        const double diff = std::abs(sc.doubled - sc.value);
        // Values that vanish at both truncations count as converged.
        sc.delta = scale > 1e-10 ? diff / scale : diff;
        sc.passed = sc.delta < request.convergence_gate;
        result.spot_checks[k * nc + c] = sc;
      }
    });
    for (auto& row : rows) {
      for (const auto& sc : result.spot_checks) {
        if (sc.curve == row.curve && !sc.passed) row.converged = false;
      }
    }
  }

  std::vector<std::size_t> by_id(nc);
  for (std::size_t c = 0; c < nc; ++c) by_id[c] = c;
  std::sort(by_id.begin(), by_id.end(),
            [&](std::size_t a, std::size_t b) { return curves[a].id < curves[b].id; });
  result.rows.reserve(rows.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t c : by_id) result.rows.push_back(rows[i * nc + c]);
  }
  return result;
}

// ------------------------------------------------------------------ output

namespace {

constexpr const char* kCsvHeader =
    "u,negativity_normalized,power,state,species,mode_a,mode_b,converged";

}  // namespace

void emit_csv(const SweepResult& result, std::ostream& out) {
  out << kCsvHeader << "\n";
  for (const auto& row : result.rows) {
    const auto& p = result.request.curves.at(row.curve).pair;
    out << fmt17(row.u) << "," << fmt17(row.value) << "," << row.power << ","
        << to_string(p.state) << "," << to_string(p.species) << "," << p.mode_a
        << "," << p.mode_b << "," << (row.converged ? "true" : "false") << "\n";
  }
  if (!out) throw std::ios_base::failure("write failed");
}

void emit_json(const SweepResult& result, std::ostream& out) {
  using nlohmann::ordered_json;
  const auto& req = result.request;
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(result.config_hash));

  ordered_json meta;
  meta["tool"] = "cavent";
  meta["version"] = version();
  meta["config_hash"] = hash;
  meta["preset"] = req.name;
  meta["n_max"] = req.n_max;
  meta["h"] = req.h;
  meta["u_start"] = req.u_start;
  meta["u_stop"] = req.u_stop;
  meta["steps"] = req.steps;
  meta["probes"] = req.probes.empty() ? default_probes() : req.probes;
  meta["junction_ladder"] = oracles::default_ladder(req.n_max);
  meta["convergence_gate"] = req.convergence_gate;
  meta["converged"] = result.converged();
  meta["warnings"] = req.warnings;
  ordered_json curves = ordered_json::array();
  for (const auto& c : req.curves) {
    curves.push_back({{"id", c.id},
                      {"species", to_string(c.pair.species)},
                      {"state", to_string(c.pair.state)},
                      {"mode_a", c.pair.mode_a},
                      {"mode_b", c.pair.mode_b},
                      {"power", c.power}});
  }
  meta["curves"] = std::move(curves);
  ordered_json spots = ordered_json::array();
  for (const auto& s : result.spot_checks) {
    spots.push_back({{"curve", req.curves.at(s.curve).id},
                     {"u", s.u},
                     {"value", s.value},
                     {"value_doubled_n_max", s.doubled},
                     {"delta", s.delta},
                     {"passed", s.passed}});
  }
  meta["spot_checks"] = std::move(spots);

  ordered_json rows = ordered_json::array();
  for (const auto& row : result.rows) {
    const auto& p = req.curves.at(row.curve).pair;
    rows.push_back({{"u", row.u},
                    {"negativity_normalized", row.value},
                    {"power", row.power},
                    {"state", to_string(p.state)},
                    {"species", to_string(p.species)},
                    {"mode_a", p.mode_a},
                    {"mode_b", p.mode_b},
                    {"converged", row.converged}});
  }
  ordered_json doc;
  doc["metadata"] = std::move(meta);
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << "\n";
  if (!out) throw std::ios_base::failure("write failed");
}

std::vector<SweepRow> read_csv(std::istream& in, const SweepRequest& request) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kCsvHeader) {
    throw ConfigError("csv: unexpected header");
  }
  std::vector<SweepRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto ctx = "csv " + where(line_no);
    const auto f = split(line, ',');
    if (f.size() != 8) throw ConfigError(ctx + "expected 8 fields");
    PairCase p;
    p.state = parse_state(f[3], ctx);
    p.species = parse_species(f[4], ctx);
    p.mode_a = to_int(f[5], ctx);
    p.mode_b = to_int(f[6], ctx);
    SweepRow row;
    row.u = to_double(f[0], ctx);
    row.value = to_double(f[1], ctx);
    row.power = to_int(f[2], ctx);
    row.converged = to_bool(f[7], ctx);
    const auto it = std::find_if(request.curves.begin(), request.curves.end(), [&](const CurveSpec& c) {
      return c.pair.species == p.species && c.pair.state == p.state &&
             c.pair.mode_a == p.mode_a && c.pair.mode_b == p.mode_b;
    });
    if (it == request.curves.end()) throw ConfigError(ctx + "row matches no curve");
    row.curve = static_cast<std::size_t>(it - request.curves.begin());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cavent
