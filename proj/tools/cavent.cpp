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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cavent/errors.hpp"
#include "cavent/scenarios.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfig = 2;
constexpr int kNotConverged = 3;
constexpr int kInvariant = 4;

cavent::SweepRequest load_request(const std::string& source) {
  namespace fs = std::filesystem;
  if (fs::is_regular_file(source)) {
    std::ifstream in(source);
    std::stringstream text;
    text << in.rdbuf();
    if (!in) throw cavent::ConfigError("cannot read " + source);
    return cavent::parse_config(text.str());
  }
  for (const auto& name : cavent::preset_names()) {
    if (name == source) return cavent::preset(source);
  }
  throw cavent::ConfigError("'" + source + "' is neither a file nor a preset");
}

struct SweepArgs {
  std::string config;
  std::optional<int> n_max;
  std::optional<double> h;
  std::optional<int> steps;
  std::optional<std::string> format;
  std::string out = "-";
  unsigned threads = 0;
  bool no_convergence = false;
};

int run_sweep_command(const SweepArgs& a) {
  auto req = load_request(a.config);
  if (a.n_max) req.n_max = *a.n_max;
  if (a.h) req.h = *a.h;
  if (a.steps) req.steps = *a.steps;
  if (a.format) req.format = *a.format;
  if (a.no_convergence) req.convergence_check = false;
  req.validate();
  for (const auto& w : req.warnings) std::cerr << "warning: " << w << "\n";

  cavent::RunOptions opts;
  opts.threads = a.threads;
  const auto result = cavent::run_sweep(req, opts);

  auto emit = [&](std::ostream& os) {
    if (req.format == "json") {
      cavent::emit_json(result, os);
    } else {
      cavent::emit_csv(result, os);
    }
  };
  if (a.out == "-") {
    emit(std::cout);
  } else {
    std::ofstream os(a.out);
    if (!os) throw std::ios_base::failure("cannot open " + a.out);
    emit(os);
  }
  for (const auto& s : result.spot_checks) {
    if (!s.passed) {
      std::fprintf(stderr, "not converged: %s at u=%.4g, delta %.3e\n",
                   req.curves[s.curve].id.c_str(), s.u, s.delta);
    }
  }
  return result.converged() ? kOk : kNotConverged;
}

int run_oracle_command(int n_max, const std::string& cache_dir) {
  cavent::CacheOptions cache = cavent::CacheOptions::from_environment();
  if (!cache_dir.empty()) cache.directory = cache_dir;
  if (!cache.directory) {
    throw cavent::ConfigError("no cache directory: pass --cache-dir or set CAVENT_CACHE_DIR");
  }
  std::filesystem::create_directories(*cache.directory);
  cache.refresh = true;
  const cavent::CavityGeometry geom{1.0, 0.01};
  const auto b = cavent::boson_building_block(geom, n_max, cache);
  const auto f = cavent::fermion_building_block(geom, n_max, 0.0, cache);
  bool ok = true;
  for (const auto& [species, r] :
       {std::pair{cavent::Species::boson, cavent::identity_check(b)},
        std::pair{cavent::Species::fermion, cavent::identity_check(f)}}) {
    std::printf("%s: %s\n", cavent::to_string(species),
                cavent::cache_file(*cache.directory, species, n_max).c_str());
    for (int k = 0; k < 3; ++k) {
      std::printf("  order %d identity residual %.3e\n", k,
                  std::max(r.normalization[k], r.symmetry[k]));
    }
    ok = ok && std::max(r.normalization[0], r.symmetry[0]) < 1e-8 &&
         std::max(r.normalization[1], r.symmetry[1]) < 1e-8;
  }
  return ok ? kOk : kInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement generated in a travelling cavity"};
  app.set_version_flag("--version", cavent::version());
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "Sweep u for a preset or config file");
  s->add_option("config", sweep.config, "Config file or preset name (fig1a, fig1b)")->required();
  s->add_option("--nmax", sweep.n_max, "Mode truncation");
  s->add_option("--h", sweep.h, "h at which N / h^power is reported");
  s->add_option("--steps", sweep.steps, "Grid points");
  s->add_option("--out", sweep.out, "Output file, - for stdout");
  s->add_option("--format", sweep.format)->check(CLI::IsMember({"csv", "json"}));
  s->add_option("--threads", sweep.threads, "Worker threads, 0 for all cores");
  s->add_flag("--no-convergence", sweep.no_convergence, "Skip the doubled-n_max spot checks");

  int check_nmax = 40;
  auto* c = app.add_subcommand("check", "Run the built-in invariant checks");
  c->add_option("--nmax", check_nmax, "Mode truncation");

  int oracle_nmax = 40;
  std::string cache_dir;
  auto* o = app.add_subcommand("oracle", "Rebuild and validate the coefficient cache");
  o->add_option("--nmax", oracle_nmax, "Mode truncation");
  o->add_option("--cache-dir", cache_dir, "Cache directory (default: $CAVENT_CACHE_DIR)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*s) return run_sweep_command(sweep);
    if (*c) return cavent::run_checks(check_nmax, std::cout) ? kOk : kInvariant;
    if (*o) return run_oracle_command(oracle_nmax, cache_dir);
  } catch (const cavent::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const cavent::ContractViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const cavent::DiagnosticError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
