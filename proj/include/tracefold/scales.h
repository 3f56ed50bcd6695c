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

#ifndef TRACEFOLD_SCALES_H_
#define TRACEFOLD_SCALES_H_

#include <span>
#include <utility>
#include <vector>

#include "tracefold/element.h"
#include "tracefold/rational.h"

namespace tracefold {

/// Piecewise-constant function on [lo, hi]. Values at breakpoints are not
/// represented: two functions that differ only there are the same object.
class StepFunction {
 public:
  struct Piece {
    Rational lo;
    Rational hi;
    Rational value;
  };

  /// Pieces must tile [lo, hi] in order. Zero-length pieces are dropped and
  /// adjacent equal values merged.
  StepFunction(Rational lo, Rational hi, const std::vector<Piece>& pieces);
  static StepFunction constant(const Rational& lo, const Rational& hi, const Rational& value);
  /// values.size() == knots.size() - 1; knots run from lo to hi.
  static StepFunction from_knots(const std::vector<Rational>& knots, const std::vector<Rational>& values);

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  const std::vector<Piece>& pieces() const& { return pieces_; }
  std::vector<Piece> pieces() && { return std::move(pieces_); }
  /// Interior breakpoints.
  std::vector<Rational> knots() const;

  /// Value on the piece containing t (right-continuous at breakpoints).
  Rational operator()(const Rational& t) const;

  Rational integral() const;
  Rational ess_inf(const Rational& a, const Rational& b) const;
  Rational ess_sup(const Rational& a, const Rational& b) const;

  /// Lambda_delta f: the same profile moved to [lo + delta, hi + delta].
  StepFunction translated(const Rational& delta) const;
  StepFunction restricted(const Rational& a, const Rational& b) const;
  /// t -> f(lambda * t) on [lo / lambda, hi / lambda].
  StepFunction dilated(const Rational& lambda) const;
  StepFunction map(const PiecewiseAffine& phi) const;
  StepFunction power(unsigned k) const;
  bool is_non_decreasing() const;

  friend StepFunction operator+(const StepFunction& f, const StepFunction& g);
  friend StepFunction operator*(const Rational& s, const StepFunction& f);
  friend bool operator==(const StepFunction& f, const StepFunction& g);

 private:
  Rational lo_;
  Rational hi_;
  std::vector<Piece> pieces_;
};

/// Scale of projections over the dimension range [t0, t1]: E(t) is the
/// initial projection plus the prefix of `run` of mass
/// (t - t0) * mass_per_dim. mass_per_dim is 1 for scales in the ambient
/// algebra and D(P) for scales of a compression P A P measured in its own
/// normalized dimension.
class Scale {
 public:
  Scale(Projection initial, std::vector<CellId> run, Rational t0, Rational mass_per_dim = 1);

  const CellSpace& space() const { return initial_.space(); }
  const Projection& initial() const { return initial_; }
  const std::vector<CellId>& run() const { return run_; }
  const Rational& t0() const { return t0_; }
  const Rational& t1() const { return t1_; }
  const Rational& mass_per_dim() const { return mass_per_dim_; }
  /// m(E) = t1 - t0.
  Rational measure() const { return t1_ - t0_; }

  Projection terminal() const;
  /// w(E) = E(t1) - E(t0).
  Projection width() const;
  /// Cumulative dimensions at the end of each run cell (all realized breakpoints).
  std::vector<Rational> breakpoints() const;

 private:
  Projection initial_;
  std::vector<CellId> run_;
  Rational t0_;
  Rational t1_;
  Rational mass_per_dim_;
};

/// Throws on duplicate cells, cells inside `initial`, or overflow of the space.
Scale make_scale(const CellSpace& space, std::vector<CellId> run);
Scale make_scale(const Projection& initial, std::vector<CellId> run, const Rational& mass_per_dim = 1);

/// The scale moved onto a refinement of its space.
Scale lift(const Scale& scale, const CellSpace& target);

/// Refines the space so that E(t) is realized for every given t.
Scale refine(const Scale& scale, std::span<const Rational> ts);

struct ScaleCut {
  Scale scale;
  Projection projection;
};
/// E(t), mass-splitting the straddled cell when t is interior to it.
ScaleCut eval(const Scale& scale, const Rational& t);

/// The sub-scale over [a, b]: initial projection E(a), run up to E(b).
Scale restrict(const Scale& scale, const Rational& a, const Rational& b);

/// Sum of value * (E(r) - E(l)) over the pieces of f; f's domain must be the
/// dimension range.
Element riemann_integral(const Scale& scale, const StepFunction& f);

struct DarbouxBounds {
  Element lower;
  Element upper;
};
/// Lower and upper Darboux sums over `partition` (t0 = p_0 < ... < p_n = t1),
/// using essential inf/sup of f on each interval.
DarbouxBounds darboux_bounds(const Scale& scale, const StepFunction& f, std::span<const Rational> partition);

/// Full scale over [0, total] running the cells of a step element by
/// ascending value (ties by cell id), so every e_(-inf, x) and e_(-inf, x]
/// is a prefix.
Scale spectral_scale(const Element& e);
/// Same ordering restricted to the support: a scale over [0, D(s(e))]
/// ending at s(e).
Scale support_scale(const Element& e);
/// The values of a step element read along a scale's run, as a step
/// function over its dimension range.
StepFunction profile(const Scale& scale, const Element& e);
/// Quantile of a step element as a step function on [0, total].
StepFunction step_quantile(const Element& e);

enum class Direction { kDown, kUp };
/// Down: P <= E(t0), range shifted by -D(P). Up: P orthogonal to E(t1),
/// range shifted by +D(P).
Scale translate(const Scale& scale, Direction direction, const Projection& p);

/// `first`'s run followed by `second`'s; widths must be orthogonal.
Scale concat(const Scale& first, const Scale& second);

/// Dimension range scaled by lambda, E'(s) = E(s / lambda).
Scale rescale_dims(const Scale& scale, const Rational& lambda);

}  // namespace tracefold

#endif  // TRACEFOLD_SCALES_H_
