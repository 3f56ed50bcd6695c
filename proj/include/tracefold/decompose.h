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

#ifndef TRACEFOLD_DECOMPOSE_H_
#define TRACEFOLD_DECOMPOSE_H_

#include <string>
#include <vector>

#include "tracefold/element.h"
#include "tracefold/folding.h"
#include "tracefold/rational.h"

namespace tracefold {

struct SymmetricFolding {
  /// Spectrally symmetric element beta*Q1 - beta*Q3.
  Element s;
  /// 2-folding of X as S.
  Folding folding;
  Rational beta;
  Rational delta;
};

/// Folds a step element X with q(X) = 0 and D(s(X)) < D(U)/2 as a spectrally
/// symmetric element, using only room under the unit projection U.
SymmetricFolding fold_as_symmetric(const Element& x, const Projection& unit);
/// Same with U the identity.
SymmetricFolding fold_as_symmetric(const Element& x);

/// A named intermediate element and the construction step that produced it.
struct TrailEntry {
  std::string name;
  std::string origin;
  Element value;
};

struct Decomposition {
  /// The element decomposed: X itself, or its corner embedding when stabilized.
  Element input;
  Element x1;
  Element x2;
  Element x3;
  bool stabilized = false;
  std::vector<TrailEntry> trail;
  Report report;
};

/// X = X1 + X2 + X3 with each summand spectrally symmetric, all on one
/// space. Requires X step, q(X) = 0 and D(s(X)) below the total mass.
Decomposition three_symmetric(const Element& x);

/// Corner embedding: every cell keeps its id and value at half its mass,
/// and a fresh cell of half the total mass carries 0.
Element embed_corner(const Element& x);

/// three_symmetric applied to embed_corner(X); accepts full-support X.
Decomposition stabilize_decompose(const Element& x);

/// Independent re-check: exact sum, symmetry of each summand (mirror test
/// cross-checked by vanishing odd moments up to 2 * (atoms of X) + 1),
/// vanishing traces and one common space.
Report verify_decomposition(const Element& x, const Element& x1, const Element& x2, const Element& x3);
Report verify_decomposition(const Decomposition& d);

/// Re-checks the recorded intermediate identities
/// X = A1 + A2 - B1 - B2 + Y and Y = (Y1 - S1) + (Y2 - S2) + S.
Report check_trail(const Decomposition& d);

/// Cell budget enforced after every decomposition: a polynomial in the
/// input's cell count c and the packing parameter n.
std::size_t cell_budget(std::size_t input_cells, std::size_t n);

}  // namespace tracefold

#endif  // TRACEFOLD_DECOMPOSE_H_
