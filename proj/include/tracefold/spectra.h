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

#ifndef TRACEFOLD_SPECTRA_H_
#define TRACEFOLD_SPECTRA_H_

#include <utility>
#include <vector>

#include "tracefold/element.h"
#include "tracefold/rational.h"

namespace tracefold {

/// Constant density `height` on [lo, hi].
struct DensityPiece {
  Rational lo;
  Rational hi;
  Rational height;

  friend bool operator==(const DensityPiece& x, const DensityPiece& y) {
    return x.lo == y.lo && x.hi == y.hi && x.height == y.height;
  }
};

/// Scalar spectral measure: finitely many atoms plus a piecewise-constant
/// density. Always held in canonical form (atoms sorted and merged; density
/// re-broken on the union grid, zero pieces dropped, adjacent equal heights
/// merged) so that equality of measures is structural equality.
class SpectralDistribution {
 public:
  SpectralDistribution() = default;
  SpectralDistribution(std::vector<Atom> atoms, std::vector<DensityPiece> density);

  const std::vector<Atom>& atoms() const& { return atoms_; }
  std::vector<Atom> atoms() && { return std::move(atoms_); }
  const std::vector<DensityPiece>& density() const& { return density_; }
  std::vector<DensityPiece> density() && { return std::move(density_); }
  Rational total_mass() const;

  /// Pushforward under t -> -t.
  SpectralDistribution mirrored() const;
  /// mu((-inf, x]) when inclusive, mu((-inf, x)) otherwise.
  Rational mass_below(const Rational& x, bool inclusive) const;
  /// Closed hull of the support, as {min, max}; {0, 0} for the zero measure.
  std::pair<Rational, Rational> support_hull() const;

  friend bool operator==(const SpectralDistribution& x, const SpectralDistribution& y) {
    return x.atoms_ == y.atoms_ && x.density_ == y.density_;
  }

 private:
  std::vector<Atom> atoms_;
  std::vector<DensityPiece> density_;
};

/// One piece of a quantile function on (t_lo, t_hi]: constant when
/// v_lo == v_hi, otherwise linear from v_lo to v_hi.
struct QuantilePiece {
  Rational t_lo;
  Rational t_hi;
  Rational v_lo;
  Rational v_hi;

  bool is_constant() const { return v_lo == v_hi; }
  friend bool operator==(const QuantilePiece& x, const QuantilePiece& y) {
    return x.t_lo == y.t_lo && x.t_hi == y.t_hi && x.v_lo == y.v_lo && x.v_hi == y.v_hi;
  }
};

/// Lower quantile t -> inf{x : mu((-inf, x]) >= t} on [0, total], left
/// continuous, with value(0) the bottom of the spectrum.
class QuantileFunction {
 public:
  explicit QuantileFunction(std::vector<QuantilePiece> pieces);

  const std::vector<QuantilePiece>& pieces() const& { return pieces_; }
  std::vector<QuantilePiece> pieces() && { return std::move(pieces_); }
  Rational total() const { return pieces_.empty() ? Rational(0) : pieces_.back().t_hi; }
  Rational operator()(const Rational& t) const;
  /// (t, value) pairs at every piece boundary, for plotting; jumps appear as
  /// two points sharing the same t.
  std::vector<std::pair<Rational, Rational>> breakpoints() const;

 private:
  std::vector<QuantilePiece> pieces_;
};

SpectralDistribution distribution(const Element& e);
Rational dist_moment(const SpectralDistribution& d, unsigned k);

/// Approximate unitary equivalence, decided as equality of spectral
/// measures. Elements may live on different spaces of equal total mass.
bool equivalent(const Element& x, const Element& y);
bool is_spectrally_symmetric(const Element& e);

QuantileFunction quantile(const SpectralDistribution& d);
QuantileFunction quantile(const Element& e);
Rational quantile_moment(const QuantileFunction& w, unsigned k);

}  // namespace tracefold

#endif  // TRACEFOLD_SPECTRA_H_
