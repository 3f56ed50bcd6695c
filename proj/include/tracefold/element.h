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

#ifndef TRACEFOLD_ELEMENT_H_
#define TRACEFOLD_ELEMENT_H_

#include <map>
#include <set>
#include <span>
#include <vector>

#include "tracefold/cellspace.h"
#include "tracefold/rational.h"

namespace tracefold {

/// The value a + b*u on a cell, u being the cell's uniform coordinate.
struct Affine {
  Rational a;
  Rational b;

  bool is_zero() const { return a == 0 && b == 0; }
  Rational at_start() const { return a; }
  Rational at_end() const { return a + b; }
  Rational min() const { return b < 0 ? Rational(a + b) : a; }
  Rational max() const { return b > 0 ? Rational(a + b) : a; }

  friend bool operator==(const Affine& x, const Affine& y) { return x.a == y.a && x.b == y.b; }
};

/// Self-adjoint element of the commutative model algebra: a per-cell affine
/// function of the cell coordinate. Cells without an entry carry 0.
///
/// Binary operations require both operands on the same space version; use
/// lift() to move an element onto a refinement first.
class Element {
 public:
  explicit Element(CellSpace space) : space_(std::move(space)) {}
  /// Zero pairs are dropped; unknown cells throw PreconditionError.
  Element(CellSpace space, std::map<CellId, Affine> coeffs);

  const CellSpace& space() const { return space_; }
  const std::map<CellId, Affine>& coeffs() const { return coeffs_; }
  Affine at(CellId cell) const;

  bool is_zero() const { return coeffs_.empty(); }
  /// No cell carries a coordinate (mediator) component.
  bool is_step() const;
  bool is_projection() const;
  bool is_positive() const;

  Element operator-() const;
  Element& operator+=(const Element& other);
  Element& operator-=(const Element& other);
  Element& operator*=(const Rational& scalar);

  friend Element operator+(Element x, const Element& y) { return x += y; }
  friend Element operator-(Element x, const Element& y) { return x -= y; }
  friend Element operator*(const Rational& s, Element x) { return x *= s; }
  /// Same space and identical per-cell pairs.
  friend bool operator==(const Element& x, const Element& y);

 private:
  CellSpace space_;
  std::map<CellId, Affine> coeffs_;
};

/// Projection of the model: the indicator of a set of cells.
class Projection {
 public:
  explicit Projection(CellSpace space) : space_(std::move(space)) {}
  Projection(CellSpace space, std::set<CellId> cells);

  /// Throws PreconditionError unless every pair is (0,0) or (1,0).
  static Projection from_element(const Element& e);
  static Projection unit(const CellSpace& space);

  const CellSpace& space() const { return space_; }
  const std::set<CellId>& cells() const { return cells_; }
  /// Cells in ascending id order.
  std::vector<CellId> ids() const { return {cells_.begin(), cells_.end()}; }
  bool contains(CellId cell) const { return cells_.count(cell) != 0; }
  bool is_zero() const { return cells_.empty(); }

  /// D(P): the mass of the cells.
  Rational dimension() const;
  Element element() const;

  bool leq(const Projection& other) const;
  bool orthogonal_to(const Projection& other) const;
  Projection join(const Projection& other) const;
  Projection minus(const Projection& other) const;
  Projection complement() const;

  friend bool operator==(const Projection& x, const Projection& y);

 private:
  CellSpace space_;
  std::set<CellId> cells_;
};

/// Remaps an element onto a refinement of its space; the distribution is
/// unchanged. Identity when `target` is the element's own space.
Element lift(const Element& e, const CellSpace& target);
Projection lift(const Projection& p, const CellSpace& target);
/// Applies a single recorded split.
Element apply(const Refinement& refinement, const Element& e);

/// The latest of several spaces along one refinement chain. Throws when one
/// of them is not refined by the result.
CellSpace finest(std::span<const CellSpace> spaces);

struct Atom {
  Rational value;
  Rational mass;

  friend bool operator==(const Atom& x, const Atom& y) { return x.value == y.value && x.mass == y.mass; }
};

/// Ingests step-spectral data: refines `space` so each distinct nonzero value
/// occupies dedicated cells (carved in ascending value order from the lowest
/// cell ids). Equal values are merged; zero values only count toward the
/// mass budget.
Element from_atoms(const CellSpace& space, std::span<const Atom> atoms);

Element linear_combine(const Rational& alpha, const Element& a, const Rational& beta, const Element& b);

/// q(A) = sum over cells of m * (a + b/2).
Rational quasitrace(const Element& e);

/// q(A^k), integrating each affine cell value analytically.
Rational moment(const Element& e, unsigned k);

struct SignedParts {
  Element positive;
  Element negative;
};

/// A = A+ - A-, with cells coordinate-split where an affine value changes sign.
SignedParts pos_neg_parts(const Element& e);

/// Indicator of the cells carrying a nonzero pair. An affine value with b != 0
/// vanishes only on a null set, so its whole cell is in the support.
Projection support(const Element& e);

/// No cell carries a nonzero pair for both.
bool orthogonal(const Element& x, const Element& y);

/// Essential supremum of |A|.
Rational sup_norm(const Element& e);

/// An element equivalent to the step element `e`, supported under `target`.
Element copy_onto(const Element& e, const Projection& target);

/// P A P: the element with every cell outside P zeroed.
Element compress(const Element& e, const Projection& p);

/// Continuous piecewise-affine map of the real line: linear interpolation
/// between knots, extended by the first and last segments' slopes.
class PiecewiseAffine {
 public:
  struct Knot {
    Rational x;
    Rational y;
  };
  explicit PiecewiseAffine(std::vector<Knot> knots);

  Rational operator()(const Rational& x) const;
  const std::vector<Knot>& knots() const { return knots_; }
  /// Slope and intercept of the segment containing x (right-continuous
  /// choice at knots).
  std::pair<Rational, Rational> segment_at(const Rational& x) const;

 private:
  std::vector<Knot> knots_;
};

/// Functional calculus phi(A); coordinate-splits affine cells at knots so
/// the result stays affine per cell.
Element apply(const PiecewiseAffine& phi, const Element& e);

/// Consecutive slices of `available` taken in ascending cell-id order.
struct Carving {
  std::vector<Projection> pieces;
  Projection rest;
};

/// Carves projections of the given dimensions out of `available`,
/// mass-splitting the last cell of each slice when needed.
Carving carve(const Projection& available, std::span<const Rational> masses);

}  // namespace tracefold

#endif  // TRACEFOLD_ELEMENT_H_
