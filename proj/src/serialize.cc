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

#include "tracefold/serialize.h"

namespace tracefold {

namespace {

constexpr const char* kReportFormat = "tracefold.decomposition/1";

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

CellId cell_id_from_json(const Json& j) {
  if (!j.is_number_unsigned()) throw FormatError("cell ids must be non-negative integers");
  return j.get<CellId>();
}

}  // namespace

Json to_json(const Rational& r) { return to_string(r); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
  }
  throw FormatError("rationals must be integers or \"p/q\" strings, got " + j.dump());
}

Json to_json(const CellSpace& space) {
  Json cells = Json::array();
  for (const CellPtr& c : space.cells()) cells.push_back({{"id", c->id}, {"mass", to_json(c->mass)}});
  return {{"total_mass", to_json(space.total_mass())}, {"cells", std::move(cells)}};
}

CellSpace space_from_json(const Json& j) {
  const Json& cells = field(j, "cells");
  if (!cells.is_array()) throw FormatError("\"cells\" must be an array");
  std::vector<std::pair<CellId, Rational>> pairs;
  for (const auto& c : cells) pairs.emplace_back(cell_id_from_json(field(c, "id")), rational_from_json(field(c, "mass")));
  try {
    return CellSpace::from_cells(rational_from_json(field(j, "total_mass")), pairs);
  } catch (const PreconditionError& e) {
    throw FormatError(std::string("invalid space: ") + e.what());
  }
}

Json to_json(const Element& e) {
  Json cells = Json::array();
  for (const auto& [id, v] : e.coeffs()) cells.push_back({{"cell", id}, {"a", to_json(v.a)}, {"b", to_json(v.b)}});
  return cells;
}

Element element_from_json(const Json& j, const CellSpace& space) {
  if (!j.is_array()) throw FormatError("an element must be an array of cell entries");
  std::map<CellId, Affine> coeffs;
  for (const auto& c : j) {
    const CellId id = cell_id_from_json(field(c, "cell"));
    if (space.find(id) == nullptr) throw FormatError("element refers to unknown cell " + std::to_string(id));
    Affine v{rational_from_json(field(c, "a")), c.contains("b") ? rational_from_json(c.at("b")) : Rational(0)};
    if (!coeffs.emplace(id, std::move(v)).second) throw FormatError("cell " + std::to_string(id) + " listed twice");
  }
  return Element(space, std::move(coeffs));
}

Json to_json(const SpectralDistribution& d) {
  Json atoms = Json::array();
  for (const auto& a : d.atoms()) atoms.push_back({{"value", to_json(a.value)}, {"mass", to_json(a.mass)}});
  Json density = Json::array();
  for (const auto& p : d.density()) {
    density.push_back({{"lo", to_json(p.lo)}, {"hi", to_json(p.hi)}, {"height", to_json(p.height)}});
  }
  return {{"atoms", std::move(atoms)}, {"density", std::move(density)}};
}

Json to_json(const QuantileFunction& w) {
  Json pieces = Json::array();
  for (const auto& p : w.pieces()) {
    pieces.push_back(
        {{"t_lo", to_json(p.t_lo)}, {"t_hi", to_json(p.t_hi)}, {"v_lo", to_json(p.v_lo)}, {"v_hi", to_json(p.v_hi)}});
  }
  return pieces;
}

Json to_json(const StepFunction& f) {
  Json pieces = Json::array();
  for (const auto& p : f.pieces()) pieces.push_back({to_json(p.lo), to_json(p.value)});
  return {{"lo", to_json(f.lo())}, {"hi", to_json(f.hi())}, {"pieces", std::move(pieces)}};
}

Json to_json(const Report& r) { return r.failures; }

Json to_json(const Folding& f) {
  Json first = Json::array(), second = Json::array();
  for (const auto& e : f.first()) first.push_back(to_json(e));
  for (const auto& e : f.second()) second.push_back(to_json(e));
  return {{"k", f.k()},
          {"first", std::move(first)},
          {"second", std::move(second)},
          {"norm", to_json(f.norm())},
          {"failures", to_json(validate_folding(f))}};
}

AtomsInput atoms_from_json(const Json& j) {
  AtomsInput in;
  const Json& atoms = field(j, "atoms");
  if (!atoms.is_array()) throw FormatError("\"atoms\" must be an array");
  Rational total = 0;
  for (const auto& a : atoms) {
    if (!a.is_object()) throw FormatError("each atom must be an object with \"value\" and \"mass\"");
    Atom atom{rational_from_json(field(a, "value")), rational_from_json(field(a, "mass"))};
    if (atom.mass <= 0) throw FormatError("atom masses must be positive, got " + to_string(atom.mass));
    total += atom.mass;
    in.atoms.push_back(std::move(atom));
  }
  if (total > 1) throw FormatError("atom masses sum to " + to_string(total) + ", above 1");
  if (j.contains("stabilize")) {
    if (!j.at("stabilize").is_boolean()) throw FormatError("\"stabilize\" must be a boolean");
    in.stabilize = j.at("stabilize").get<bool>();
  }
  return in;
}

Json to_json(const Decomposition& d, unsigned order) {
  Json summands = Json::array();
  const Element* xs[] = {&d.x1, &d.x2, &d.x3};
  for (int i = 0; i < 3; ++i) {
    const SpectralDistribution dist = distribution(*xs[i]);
    Json moments = Json::array();
    for (unsigned k = 1; k <= order; k += 2) moments.push_back({{"k", k}, {"moment", to_json(dist_moment(dist, k))}});
    summands.push_back({{"name", "X" + std::to_string(i + 1)},
                        {"cells", to_json(*xs[i])},
                        {"distribution", to_json(dist)},
                        {"symmetric", dist == dist.mirrored()},
                        {"odd_moments", std::move(moments)}});
  }
  Json trail = Json::array();
  for (const auto& entry : d.trail) {
    trail.push_back({{"name", entry.name}, {"origin", entry.origin}, {"cells", to_json(entry.value)}});
  }
  return {{"format", kReportFormat},
          {"stabilized", d.stabilized},
          {"space", to_json(d.x1.space())},
          {"input", to_json(d.input)},
          {"summands", std::move(summands)},
          {"exact_sum", d.x1 + d.x2 + d.x3 == d.input},
          {"trail", std::move(trail)},
          {"failures", to_json(d.report)},
          {"verified", d.report.ok()}};
}

LoadedDecomposition decomposition_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("format") || j.at("format") != kReportFormat) {
    throw FormatError(std::string("not a decomposition report (expected format ") + kReportFormat + ")");
  }
  const CellSpace space = space_from_json(field(j, "space"));
  const Json& summands = field(j, "summands");
  if (!summands.is_array() || summands.size() != 3) throw FormatError("expected exactly three summands");
  return {element_from_json(field(j, "input"), space), element_from_json(field(summands[0], "cells"), space),
          element_from_json(field(summands[1], "cells"), space),
          element_from_json(field(summands[2], "cells"), space)};
}

}  // namespace tracefold
