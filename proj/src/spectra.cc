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

#include "tracefold/spectra.h"

#include <algorithm>
#include <map>

namespace tracefold {

SpectralDistribution::SpectralDistribution(std::vector<Atom> atoms, std::vector<DensityPiece> density) {
  std::map<Rational, Rational> merged;
  for (auto& atom : atoms) {
    if (atom.mass < 0) throw PreconditionError("negative atom mass");
    if (atom.mass != 0) merged[atom.value] += atom.mass;
  }
  for (auto& [value, mass] : merged) atoms_.push_back({value, mass});

  // Sweep: +height at lo, -height at hi, accumulated over the sorted grid.
  std::map<Rational, Rational> delta;
  for (auto& piece : density) {
    if (piece.height < 0 || piece.hi < piece.lo) throw PreconditionError("malformed density piece");
    if (piece.height == 0 || piece.hi == piece.lo) continue;
    delta[piece.lo] += piece.height;
    delta[piece.hi] -= piece.height;
  }
  Rational level = 0;
  const Rational* prev = nullptr;
  for (auto& [x, d] : delta) {
    if (prev != nullptr && level != 0) {
      if (!density_.empty() && density_.back().hi == *prev && density_.back().height == level) {
        density_.back().hi = x;
      } else {
        density_.push_back({*prev, x, level});
      }
    }
    level += d;
    prev = &x;
  }
}

Rational SpectralDistribution::total_mass() const {
  Rational total = 0;
  for (const auto& a : atoms_) total += a.mass;
  for (const auto& p : density_) total += p.height * (p.hi - p.lo);
  return total;
}

SpectralDistribution SpectralDistribution::mirrored() const {
  std::vector<Atom> atoms;
  for (const auto& a : atoms_) atoms.push_back({-a.value, a.mass});
  std::vector<DensityPiece> density;
  for (const auto& p : density_) density.push_back({-p.hi, -p.lo, p.height});
  return SpectralDistribution(std::move(atoms), std::move(density));
}

Rational SpectralDistribution::mass_below(const Rational& x, bool inclusive) const {
  Rational m = 0;
  for (const auto& a : atoms_) {
    if (a.value < x || (inclusive && a.value == x)) m += a.mass;
  }
  for (const auto& p : density_) {
    if (p.hi <= x) {
      m += p.height * (p.hi - p.lo);
    } else if (p.lo < x) {
      m += p.height * (x - p.lo);
    }
  }
  return m;
}

std::pair<Rational, Rational> SpectralDistribution::support_hull() const {
  bool any = false;
  Rational lo, hi;
  auto take = [&](const Rational& a, const Rational& b) {
    if (!any || a < lo) lo = a;
    if (!any || b > hi) hi = b;
    any = true;
  };
  for (const auto& a : atoms_) take(a.value, a.value);
  for (const auto& p : density_) take(p.lo, p.hi);
  return any ? std::make_pair(lo, hi) : std::make_pair(Rational(0), Rational(0));
}

QuantileFunction::QuantileFunction(std::vector<QuantilePiece> pieces) : pieces_(std::move(pieces)) {
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (p.t_hi <= p.t_lo || p.v_hi < p.v_lo) throw PreconditionError("malformed quantile piece");
    if (i > 0 && (p.t_lo != pieces_[i - 1].t_hi || p.v_lo < pieces_[i - 1].v_hi)) {
      throw PreconditionError("quantile pieces must be contiguous and non-decreasing");
    }
  }
  if (!pieces_.empty() && pieces_.front().t_lo != 0) throw PreconditionError("quantile must start at t = 0");
}

Rational QuantileFunction::operator()(const Rational& t) const {
  if (pieces_.empty()) return 0;
  if (t < 0 || t > total()) throw PreconditionError("quantile argument out of range");
  if (t == 0) return pieces_.front().v_lo;
  auto it = std::lower_bound(pieces_.begin(), pieces_.end(), t,
                             [](const QuantilePiece& p, const Rational& x) { return p.t_hi < x; });
  const auto& p = *it;
  return p.v_lo + (p.v_hi - p.v_lo) * (t - p.t_lo) / (p.t_hi - p.t_lo);
}

std::vector<std::pair<Rational, Rational>> QuantileFunction::breakpoints() const {
  std::vector<std::pair<Rational, Rational>> out;
  for (const auto& p : pieces_) {
    if (out.empty() || out.back().first != p.t_lo || out.back().second != p.v_lo) out.emplace_back(p.t_lo, p.v_lo);
    out.emplace_back(p.t_hi, p.v_hi);
  }
  return out;
}

SpectralDistribution distribution(const Element& e) {
  std::vector<Atom> atoms;
  std::vector<DensityPiece> density;
  Rational covered = 0;
  for (const auto& [id, v] : e.coeffs()) {
    const Rational& m = e.space().mass(id);
    covered += m;
    if (v.b == 0) {
      atoms.push_back({v.a, m});
    } else {
      density.push_back({v.min(), v.max(), m / abs(v.b)});
    }
  }
  const Rational residual = e.space().total_mass() - covered;
  if (residual > 0) atoms.push_back({0, residual});
  return SpectralDistribution(std::move(atoms), std::move(density));
}

Rational dist_moment(const SpectralDistribution& d, unsigned k) {
  if (k == 0) throw PreconditionError("moment order must be >= 1");
  Rational sum = 0;
  for (const auto& a : d.atoms()) sum += pow(a.value, k) * a.mass;
  for (const auto& p : d.density()) sum += p.height * (pow(p.hi, k + 1) - pow(p.lo, k + 1)) / (k + 1);
  return sum;
}

bool equivalent(const Element& x, const Element& y) {
  if (x.space().total_mass() != y.space().total_mass()) {
    throw PreconditionError("equivalence needs equal total masses (" + to_string(x.space().total_mass()) + " vs " +
                            to_string(y.space().total_mass()) + ")");
  }
  return distribution(x) == distribution(y);
}

bool is_spectrally_symmetric(const Element& e) {
  const SpectralDistribution d = distribution(e);
  return d == d.mirrored();
}

QuantileFunction quantile(const SpectralDistribution& d) {
  // Density pieces are cut at atom positions so every piece is either an
  // atom or a density interval with nothing else inside it.
  struct Event {
    Rational lo;
    Rational hi;
    Rational mass;
  };
  std::vector<Event> events;
  for (const auto& a : d.atoms()) events.push_back({a.value, a.value, a.mass});
  for (const auto& p : d.density()) {
    Rational start = p.lo;
    for (const auto& a : d.atoms()) {
      if (a.value > start && a.value < p.hi) {
        events.push_back({start, a.value, p.height * (a.value - start)});
        start = a.value;
      }
    }
    events.push_back({start, p.hi, p.height * (p.hi - start)});
  }
  // Atoms at x sort after density ending at x and before density starting at x.
  std::sort(events.begin(), events.end(), [](const Event& l, const Event& r) {
    if (l.lo != r.lo) return l.lo < r.lo;
    return l.hi < r.hi;
  });
  std::vector<QuantilePiece> pieces;
  Rational t = 0;
  for (const auto& ev : events) {
    pieces.push_back({t, t + ev.mass, ev.lo, ev.hi});
    t += ev.mass;
  }
  return QuantileFunction(std::move(pieces));
}

QuantileFunction quantile(const Element& e) { return quantile(distribution(e)); }

Rational quantile_moment(const QuantileFunction& w, unsigned k) {
  if (k == 0) throw PreconditionError("moment order must be >= 1");
  Rational sum = 0;
  for (const auto& p : w.pieces()) {
    const Rational len = p.t_hi - p.t_lo;
    if (p.is_constant()) {
      sum += pow(p.v_lo, k) * len;
    } else {
      // Substituting v = v_lo + (v_hi - v_lo)(t - t_lo)/len.
      sum += len * (pow(p.v_hi, k + 1) - pow(p.v_lo, k + 1)) / ((k + 1) * (p.v_hi - p.v_lo));
    }
  }
  return sum;
}

}  // namespace tracefold
