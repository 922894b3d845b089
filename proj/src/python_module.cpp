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

#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cavent/building_blocks.hpp"
#include "cavent/errors.hpp"
#include "cavent/negativity.hpp"
#include "cavent/scenarios.hpp"

namespace py = pybind11;
using namespace cavent;

namespace {

py::list orders(const SeriesMatrix& m) {
  py::list out;
  for (int k = 0; k < 3; ++k) out.append(py::cast(m.order(k)));
  return out;
}

Species species_from(const std::string& s) {
  if (s == "boson") return Species::boson;
  if (s == "fermion") return Species::fermion;
  throw ConfigError("species must be 'boson' or 'fermion'");
}

InStateKind state_from(const std::string& s) {
  if (s == "vacuum") return InStateKind::vacuum;
  if (s == "one_particle") return InStateKind::one_particle;
  if (s == "pair") return InStateKind::pair;
  throw ConfigError("state must be 'vacuum', 'one_particle' or 'pair'");
}

SweepRequest load(const std::string& config) {
  for (const auto& name : preset_names()) {
    if (name == config) return preset(config);
  }
  return parse_config(config);
}

py::dict row_dict(const SweepResult& r, const SweepRow& row) {
  const auto& p = r.request.curves.at(row.curve).pair;
  py::dict d;
  d["u"] = row.u;
  d["negativity_normalized"] = row.value;
  d["power"] = row.power;
  d["state"] = to_string(p.state);
  d["species"] = to_string(p.species);
  d["mode_a"] = p.mode_a;
  d["mode_b"] = p.mode_b;
  d["converged"] = row.converged;
  d["curve"] = r.request.curves.at(row.curve).id;
  d["leading_power"] = row.leading_power;
  d["coefficient"] = row.coefficient;
  return d;
}

}  // namespace

PYBIND11_MODULE(_cavent, m) {
  m.doc() = "Entanglement generated by moving a cavity, to second order in h.";
  m.attr("__version__") = version();

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<DiagnosticError>(m, "DiagnosticError", PyExc_RuntimeError);
  py::register_exception<PerturbativeRangeError>(m, "PerturbativeRangeError", PyExc_ValueError);

  m.def(
      "boson_junction",
      [](int n_max) {
        const auto b = boson_building_block({1.0, 0.01}, n_max);
        py::dict d;
        d["alpha"] = orders(b.alpha);
        d["beta"] = orders(b.beta);
        return d;
      },
      py::arg("n_max") = 40,
      "h-stripped [order0, order1, order2] matrices of alpha and beta; mode n at index n - 1.");

  m.def(
      "fermion_junction",
      [](int n_max) { return orders(fermion_building_block({1.0, 0.01}, n_max).A); },
      py::arg("n_max") = 40,
      "h-stripped [order0, order1, order2] matrices of A; kappa at index kappa + n_max.");

  m.def(
      "analyze",
      [](const std::string& species, const std::string& state, int mode_a, int mode_b,
         double u, double h, int n_max) {
        const PairCase c{species_from(species), state_from(state), mode_a, mode_b};
        c.validate(n_max);
        const auto t = assemble(c.species, TravelScenario::single_segment(h, u), n_max);
        AnalysisOptions opts;
        opts.h = h;
        const auto r = analyze(t, c, opts);
        py::dict d;
        d["negativity"] = r.negativity;
        d["pt_eigenvalues"] = r.pt_eigenvalues;
        d["zero"] = r.leading.zero;
        d["power"] = r.leading.power;
        d["coefficient"] = r.leading.coefficient;
        d["extrapolated"] = r.leading.extrapolated;
        d["slope"] = r.leading.slope;
        py::list cf;
        for (const auto& e : r.closed_form) {
          py::dict x;
          x["name"] = e.name;
          x["value"] = e.value;
          x["power"] = e.power;
          x["coefficient"] = e.coefficient;
          cf.append(x);
        }
        d["closed_form"] = cf;
        return d;
      },
      py::arg("species"), py::arg("state"), py::arg("mode_a"), py::arg("mode_b"), py::arg("u"),
      py::arg("h") = 0.01, py::arg("n_max") = 40);

  m.def("preset_names", &preset_names);
  m.def("preset_text", [](const std::string& name) { return preset_text(name); });

  py::class_<SweepResult>(m, "SweepResult")
      .def_property_readonly("rows",
                             [](const SweepResult& r) {
                               py::list out;
                               for (const auto& row : r.rows) out.append(row_dict(r, row));
                               return out;
                             })
      .def_property_readonly("converged", &SweepResult::converged)
      .def_property_readonly("config_hash", [](const SweepResult& r) { return r.config_hash; })
      .def("to_csv",
           [](const SweepResult& r) {
             std::ostringstream o;
             emit_csv(r, o);
             return o.str();
           })
      .def("to_json", [](const SweepResult& r) {
        std::ostringstream o;
        emit_json(r, o);
        return o.str();
      });

  m.def(
      "sweep",
      [](const std::string& config, std::optional<int> n_max, std::optional<double> h,
         std::optional<int> steps, bool convergence_check) {
        auto req = load(config);
        if (n_max) req.n_max = *n_max;
        if (h) req.h = *h;
        if (steps) req.steps = *steps;
        req.convergence_check = convergence_check;
        py::gil_scoped_release release;
        return run_sweep(req);
      },
      py::arg("config"), py::arg("n_max") = py::none(), py::arg("h") = py::none(),
      py::arg("steps") = py::none(), py::arg("convergence_check") = true,
      "Runs a preset name or config text.");

  m.def(
      "run_checks",
      [](int n_max) {
        std::ostringstream log;
        const bool ok = run_checks(n_max, log);
        return py::make_tuple(ok, log.str());
      },
      py::arg("n_max") = 40);
}
