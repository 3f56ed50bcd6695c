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

#ifndef TRACEFOLD_SERIALIZE_H_
#define TRACEFOLD_SERIALIZE_H_

#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "tracefold/decompose.h"
#include "tracefold/element.h"
#include "tracefold/folding.h"
#include "tracefold/scales.h"
#include "tracefold/spectra.h"

namespace tracefold {

using Json = nlohmann::ordered_json;

/// Input that does not match the expected schema.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rationals are written as "p/q" strings; integers and such strings are read.
Json to_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json to_json(const CellSpace& space);
CellSpace space_from_json(const Json& j);

/// Per-cell table [{"cell", "a", "b"}], ascending cell id.
Json to_json(const Element& e);
Element element_from_json(const Json& j, const CellSpace& space);

Json to_json(const SpectralDistribution& d);
Json to_json(const QuantileFunction& w);
Json to_json(const StepFunction& f);
Json to_json(const Report& r);
Json to_json(const Folding& f);

/// Job input {"atoms": [{"value", "mass"}, ...], "stabilize": bool}.
struct AtomsInput {
  std::vector<Atom> atoms;
  bool stabilize = false;
};
AtomsInput atoms_from_json(const Json& j);

/// Full decomposition report: shared space, input, summands with their
/// distributions, symmetry flags and odd moments up to `order`, the exact-sum
/// check, the trail and the verification failures.
Json to_json(const Decomposition& d, unsigned order);

struct LoadedDecomposition {
  Element input;
  Element x1;
  Element x2;
  Element x3;
};
/// Rebuilds the input and summands of a report written by to_json above.
LoadedDecomposition decomposition_from_json(const Json& j);

}  // namespace tracefold

#endif  // TRACEFOLD_SERIALIZE_H_
