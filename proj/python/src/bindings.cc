// Copyright 2026 The Tracefold Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "tracefold/decompose.h"
#include "tracefold/element.h"
#include "tracefold/folding.h"
#include "tracefold/serialize.h"
#include "tracefold/spectra.h"

namespace py = pybind11;

namespace tracefold {
namespace {

using AtomList = std::vector<std::pair<std::string, std::string>>;

// Goes through the JSON reader so Python input gets the same validation as
// the command-line tool.
AtomsInput read_atoms(const AtomList& atoms) {
  Json j = {{"atoms", Json::array()}};
  for (const auto& [value, mass] : atoms) j["atoms"].push_back({{"value", value}, {"mass", mass}});
  return atoms_from_json(j);
}

Element element_of(const AtomList& atoms) { return from_atoms(CellSpace::create(1), read_atoms(atoms).atoms); }

std::vector<std::string> moments(const AtomList& atoms, unsigned order) {
  const Element e = element_of(atoms);
  std::vector<std::string> out;
  for (unsigned k = 1; k <= order; ++k) out.push_back(to_string(moment(e, k)));
  return out;
}

std::vector<std::string> quantile_moments(const AtomList& atoms, unsigned order) {
  const QuantileFunction w = quantile(element_of(atoms));
  std::vector<std::string> out;
  for (unsigned k = 1; k <= order; ++k) out.push_back(to_string(quantile_moment(w, k)));
  return out;
}

AtomList distribution_atoms(const AtomList& atoms) {
  AtomList out;
  for (const auto& a : distribution(element_of(atoms)).atoms()) out.emplace_back(to_string(a.value), to_string(a.mass));
  return out;
}

std::string decompose(const AtomList& atoms, bool stabilize, unsigned order) {
  const Element x = element_of(atoms);
  return to_json(stabilize ? stabilize_decompose(x) : three_symmetric(x), order).dump(2);
}

std::vector<std::string> verify(const std::string& report) {
  const LoadedDecomposition d = decomposition_from_json(Json::parse(report));
  return verify_decomposition(d.input, d.x1, d.x2, d.x3).failures;
}

}  // namespace
}  // namespace tracefold

PYBIND11_MODULE(_core, m) {
  using namespace tracefold;
  m.doc() = "Exact tracial spectral calculus on a commutative finite model.";
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  m.def("moments", &tracefold::moments, py::arg("atoms"), py::arg("order"),
        "Exact moments q(X^k), k = 1..order, of the step element with the given (value, mass) atoms.");
  m.def("quantile_moments", &tracefold::quantile_moments, py::arg("atoms"), py::arg("order"),
        "Moments computed from the quantile function instead of the cells.");
  m.def("distribution", &distribution_atoms, py::arg("atoms"),
        "Canonical distribution atoms, including the mass at zero.");
  m.def("is_symmetric", [](const AtomList& atoms) { return is_spectrally_symmetric(element_of(atoms)); },
        py::arg("atoms"));
  m.def("equivalent", [](const AtomList& a, const AtomList& b) { return equivalent(element_of(a), element_of(b)); },
        py::arg("a"), py::arg("b"));
  m.def("mediator_moment",
        [](unsigned k) { return to_string(moment(mediator(Projection::unit(CellSpace::create(1))), k)); },
        py::arg("k"));
  m.def("decompose", &tracefold::decompose, py::arg("atoms"), py::arg("stabilize") = false, py::arg("order") = 9,
        "Three spectrally symmetric summands as a JSON report.");
  m.def("verify", &tracefold::verify, py::arg("report"), "Verification failures of a JSON report; empty when sound.");
}
