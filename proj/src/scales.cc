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

#include "tracefold/scales.h"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace tracefold {

StepFunction::StepFunction(Rational lo, Rational hi, const std::vector<Piece>& pieces)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (hi_ < lo_) throw PreconditionError("step function domain is reversed");
  Rational at = lo_;
  for (const auto& p : pieces) {
    if (p.lo != at || p.hi < p.lo) throw PreconditionError("step function pieces must tile the domain in order");
    at = p.hi;
    if (p.hi == p.lo) continue;
    if (!pieces_.empty() && pieces_.back().value == p.value) {
      pieces_.back().hi = p.hi;
    } else {
      pieces_.push_back(p);
    }
  }
  if (at != hi_) throw PreconditionError("step function pieces must end at the domain's upper end");
}

StepFunction StepFunction::constant(const Rational& lo, const Rational& hi, const Rational& value) {
  return StepFunction(lo, hi, {{lo, hi, value}});
}

StepFunction StepFunction::from_knots(const std::vector<Rational>& knots, const std::vector<Rational>& values) {
  if (knots.empty() || values.size() + 1 != knots.size()) throw PreconditionError("need one value per knot interval");
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < values.size(); ++i) pieces.push_back({knots[i], knots[i + 1], values[i]});
  return StepFunction(knots.front(), knots.back(), pieces);
}

std::vector<Rational> StepFunction::knots() const {
  std::vector<Rational> out;
  for (std::size_t i = 1; i < pieces_.size(); ++i) out.push_back(pieces_[i].lo);
  return out;
}

Rational StepFunction::operator()(const Rational& t) const {
  if (t < lo_ || t > hi_) throw PreconditionError("step function argument out of range");
  if (pieces_.empty()) return 0;
  for (const auto& p : pieces_) {
    if (t < p.hi) return p.value;
  }
  return pieces_.back().value;
}

Rational StepFunction::integral() const {
  Rational sum = 0;
  for (const auto& p : pieces_) sum += p.value * (p.hi - p.lo);
  return sum;
}

Rational StepFunction::ess_inf(const Rational& a, const Rational& b) const {
  if (!(a < b) || a < lo_ || b > hi_) throw PreconditionError("ess_inf needs a non-degenerate subinterval");
  bool any = false;
  Rational best;
  for (const auto& p : pieces_) {
    if (p.hi <= a || p.lo >= b) continue;
    if (!any || p.value < best) best = p.value;
    any = true;
  }
  return best;
}

Rational StepFunction::ess_sup(const Rational& a, const Rational& b) const {
  if (!(a < b) || a < lo_ || b > hi_) throw PreconditionError("ess_sup needs a non-degenerate subinterval");
  bool any = false;
  Rational best;
  for (const auto& p : pieces_) {
    if (p.hi <= a || p.lo >= b) continue;
    if (!any || p.value > best) best = p.value;
    any = true;
  }
  return best;
}

StepFunction StepFunction::translated(const Rational& delta) const {
  std::vector<Piece> pieces;
  for (const auto& p : pieces_) pieces.push_back({p.lo + delta, p.hi + delta, p.value});
  return StepFunction(lo_ + delta, hi_ + delta, pieces);
}

StepFunction StepFunction::restricted(const Rational& a, const Rational& b) const {
  if (a < lo_ || b > hi_ || b < a) throw PreconditionError("restriction outside the domain");
  std::vector<Piece> pieces;
  for (const auto& p : pieces_) {
    const Rational l = std::max(p.lo, a);
    const Rational r = std::min(p.hi, b);
    if (l < r) pieces.push_back({l, r, p.value});
  }
  if (pieces.empty() && a < b) pieces.push_back({a, b, 0});
  return StepFunction(a, b, pieces);
}

StepFunction StepFunction::dilated(const Rational& lambda) const {
  if (lambda <= 0) throw PreconditionError("dilation factor must be positive");
  std::vector<Piece> pieces;
  for (const auto& p : pieces_) pieces.push_back({p.lo / lambda, p.hi / lambda, p.value});
  return StepFunction(lo_ / lambda, hi_ / lambda, pieces);
}

StepFunction StepFunction::map(const PiecewiseAffine& phi) const {
  std::vector<Piece> pieces;
  for (const auto& p : pieces_) pieces.push_back({p.lo, p.hi, phi(p.value)});
  return StepFunction(lo_, hi_, pieces);
}

StepFunction StepFunction::power(unsigned k) const {
  std::vector<Piece> pieces;
  for (const auto& p : pieces_) pieces.push_back({p.lo, p.hi, pow(p.value, k)});
  return StepFunction(lo_, hi_, pieces);
}

bool StepFunction::is_non_decreasing() const {
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    if (pieces_[i].value < pieces_[i - 1].value) return false;
  }
  return true;
}

StepFunction operator+(const StepFunction& f, const StepFunction& g) {
  if (f.lo_ != g.lo_ || f.hi_ != g.hi_) throw PreconditionError("step functions live on different domains");
  std::set<Rational> grid{f.lo_, f.hi_};
  for (const auto& p : f.pieces_) grid.insert(p.hi);
  for (const auto& p : g.pieces_) grid.insert(p.hi);
  std::vector<StepFunction::Piece> pieces;
  auto it = grid.begin();
  for (auto next = std::next(it); next != grid.end(); ++it, ++next) {
    pieces.push_back({*it, *next, f(*it) + g(*it)});
  }
  return StepFunction(f.lo_, f.hi_, pieces);
}

StepFunction operator*(const Rational& s, const StepFunction& f) {
  std::vector<StepFunction::Piece> pieces;
  for (const auto& p : f.pieces_) pieces.push_back({p.lo, p.hi, s * p.value});
  return StepFunction(f.lo_, f.hi_, pieces);
}

bool operator==(const StepFunction& f, const StepFunction& g) {
  if (f.lo_ != g.lo_ || f.hi_ != g.hi_ || f.pieces_.size() != g.pieces_.size()) return false;
  for (std::size_t i = 0; i < f.pieces_.size(); ++i) {
    const auto& x = f.pieces_[i];
    const auto& y = g.pieces_[i];
    if (x.lo != y.lo || x.hi != y.hi || x.value != y.value) return false;
  }
  return true;
}

Scale::Scale(Projection initial, std::vector<CellId> run, Rational t0, Rational mass_per_dim)
    : initial_(std::move(initial)), run_(std::move(run)), t0_(std::move(t0)), mass_per_dim_(std::move(mass_per_dim)) {
  if (mass_per_dim_ <= 0) throw PreconditionError("mass_per_dim must be positive");
  std::unordered_set<CellId> seen;
  for (CellId id : run_) {
    space().cell(id);
    if (!seen.insert(id).second) throw PreconditionError("scale run repeats a cell");
    if (initial_.contains(id)) throw PreconditionError("scale run overlaps the initial projection");
  }
  t1_ = t0_ + mass_of(space(), run_) / mass_per_dim_;
}

Projection Scale::terminal() const { return initial_.join(width()); }

Projection Scale::width() const { return Projection(space(), std::set<CellId>(run_.begin(), run_.end())); }

std::vector<Rational> Scale::breakpoints() const {
  std::vector<Rational> out{t0_};
  Rational at = t0_;
  for (CellId id : run_) {
    at += space().mass(id) / mass_per_dim_;
    out.push_back(at);
  }
  return out;
}

Scale make_scale(const CellSpace& space, std::vector<CellId> run) {
  return Scale(Projection(space), std::move(run), 0, 1);
}

Scale make_scale(const Projection& initial, std::vector<CellId> run, const Rational& mass_per_dim) {
  return Scale(initial, std::move(run), initial.dimension() / mass_per_dim, mass_per_dim);
}

Scale lift(const Scale& scale, const CellSpace& target) {
  if (scale.space().same_as(target)) return scale;
  const std::map<CellId, CellId> parent = ancestry(scale.space(), target);
  std::map<CellId, std::vector<CellId>> descendants;
  for (const CellPtr& c : target.cells()) descendants[parent.at(c->id)].push_back(c->id);
  std::vector<CellId> run;
  for (CellId id : scale.run()) {
    auto it = descendants.find(id);
    if (it != descendants.end()) run.insert(run.end(), it->second.begin(), it->second.end());
  }
  return Scale(lift(scale.initial(), target), std::move(run), scale.t0(), scale.mass_per_dim());
}

namespace {

// Cumulative run masses for the given dimension positions.
std::vector<Rational> mass_cuts(const Scale& scale, std::span<const Rational> ts) {
  std::vector<Rational> cuts;
  for (const auto& t : ts) {
    if (t < scale.t0() || t > scale.t1()) {
      throw PreconditionError("scale position " + to_string(t) + " outside [" + to_string(scale.t0()) + ", " +
                              to_string(scale.t1()) + "]");
    }
    cuts.push_back((t - scale.t0()) * scale.mass_per_dim());
  }
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

Scale rebuild(const Scale& scale, const RunSlices& slices) {
  std::vector<CellId> run;
  for (const auto& seg : slices.segments) run.insert(run.end(), seg.begin(), seg.end());
  return Scale(lift(scale.initial(), slices.space), std::move(run), scale.t0(), scale.mass_per_dim());
}

}  // namespace

Scale refine(const Scale& scale, std::span<const Rational> ts) {
  const std::vector<Rational> cuts = mass_cuts(scale, ts);
  return rebuild(scale, slice_run(scale.space(), scale.run(), cuts));
}

ScaleCut eval(const Scale& scale, const Rational& t) {
  const std::vector<Rational> cuts = mass_cuts(scale, std::span<const Rational>(&t, 1));
  RunSlices slices = slice_run(scale.space(), scale.run(), cuts);
  Scale refined = rebuild(scale, slices);
  std::set<CellId> cells = refined.initial().cells();
  cells.insert(slices.segments[0].begin(), slices.segments[0].end());
  Projection p(slices.space, std::move(cells));
  return {std::move(refined), std::move(p)};
}

Scale restrict(const Scale& scale, const Rational& a, const Rational& b) {
  if (b < a) throw PreconditionError("restriction interval is reversed");
  const Rational ts[] = {a, b};
  const std::vector<Rational> cuts = mass_cuts(scale, ts);
  RunSlices slices = slice_run(scale.space(), scale.run(), cuts);
  std::set<CellId> initial = lift(scale.initial(), slices.space).cells();
  initial.insert(slices.segments[0].begin(), slices.segments[0].end());
  return Scale(Projection(slices.space, std::move(initial)), slices.segments[1], a, scale.mass_per_dim());
}

Element riemann_integral(const Scale& scale, const StepFunction& f) {
  if (f.lo() != scale.t0() || f.hi() != scale.t1()) {
    throw PreconditionError("integrand domain [" + to_string(f.lo()) + ", " + to_string(f.hi()) +
                            "] differs from the scale range [" + to_string(scale.t0()) + ", " +
                            to_string(scale.t1()) + "]");
  }
  const std::vector<Rational> knots = f.knots();
  const std::vector<Rational> cuts = mass_cuts(scale, knots);
  RunSlices slices = slice_run(scale.space(), scale.run(), cuts);
  std::map<CellId, Affine> coeffs;
  for (std::size_t i = 0; i < f.pieces().size(); ++i) {
    const Rational& value = f.pieces()[i].value;
    if (value == 0) continue;
    for (CellId id : slices.segments[i]) coeffs.emplace(id, Affine{value, 0});
  }
  return Element(slices.space, std::move(coeffs));
}

DarbouxBounds darboux_bounds(const Scale& scale, const StepFunction& f, std::span<const Rational> partition) {
  if (partition.size() < 2 || partition.front() != scale.t0() || partition.back() != scale.t1()) {
    throw PreconditionError("partition must run from t0 to t1");
  }
  std::vector<Rational> knots(partition.begin(), partition.end());
  std::vector<Rational> lower, upper;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (!(knots[i] < knots[i + 1])) throw PreconditionError("partition must be strictly increasing");
    lower.push_back(f.ess_inf(knots[i], knots[i + 1]));
    upper.push_back(f.ess_sup(knots[i], knots[i + 1]));
  }
  // Cut the scale once at every partition point so both sums share a space.
  const Scale refined = refine(scale, std::span<const Rational>(knots).subspan(1, knots.size() - 2));
  Element lo = riemann_integral(refined, StepFunction::from_knots(knots, lower));
  Element hi = riemann_integral(refined, StepFunction::from_knots(knots, upper));
  const CellSpace spaces[] = {lo.space(), hi.space()};
  const CellSpace common = finest(spaces);
  return {lift(lo, common), lift(hi, common)};
}

namespace {

std::vector<CellId> sorted_by_value(const Element& e, bool support_only) {
  if (!e.is_step()) throw PreconditionError("spectral scales need a step element");
  std::vector<std::pair<Rational, CellId>> order;
  for (const CellPtr& c : e.space().cells()) {
    const Rational v = e.at(c->id).a;
    if (support_only && v == 0) continue;
    order.emplace_back(v, c->id);
  }
  std::sort(order.begin(), order.end());
  std::vector<CellId> run;
  for (const auto& [v, id] : order) run.push_back(id);
  return run;
}

}  // namespace

Scale spectral_scale(const Element& e) { return make_scale(e.space(), sorted_by_value(e, false)); }

Scale support_scale(const Element& e) { return make_scale(e.space(), sorted_by_value(e, true)); }

StepFunction profile(const Scale& scale, const Element& e) {
  if (!scale.space().same_as(e.space())) throw PreconditionError("scale and element live on different spaces");
  if (!e.is_step()) throw PreconditionError("profile needs a step element");
  std::vector<StepFunction::Piece> pieces;
  Rational at = scale.t0();
  for (CellId id : scale.run()) {
    const Rational next = at + scale.space().mass(id) / scale.mass_per_dim();
    pieces.push_back({at, next, e.at(id).a});
    at = next;
  }
  return StepFunction(scale.t0(), scale.t1(), pieces);
}

StepFunction step_quantile(const Element& e) { return profile(spectral_scale(e), e); }

Scale translate(const Scale& scale, Direction direction, const Projection& p) {
  const Rational shift = p.dimension() / scale.mass_per_dim();
  if (direction == Direction::kDown) {
    if (!p.leq(scale.initial())) throw PreconditionError("downward translation needs P <= E(t0)");
    return Scale(scale.initial().minus(p), scale.run(), scale.t0() - shift, scale.mass_per_dim());
  }
  if (!p.orthogonal_to(scale.terminal())) throw PreconditionError("upward translation needs P orthogonal to E(t1)");
  return Scale(scale.initial().join(p), scale.run(), scale.t0() + shift, scale.mass_per_dim());
}

Scale concat(const Scale& first, const Scale& second) {
  if (!first.space().same_as(second.space())) throw PreconditionError("scales live on different spaces");
  if (first.mass_per_dim() != second.mass_per_dim()) throw PreconditionError("scales use different dimension units");
  if (!first.width().orthogonal_to(second.width())) throw PreconditionError("scale widths must be orthogonal");
  std::vector<CellId> run = first.run();
  run.insert(run.end(), second.run().begin(), second.run().end());
  return Scale(first.initial(), std::move(run), first.t0(), first.mass_per_dim());
}

Scale rescale_dims(const Scale& scale, const Rational& lambda) {
  if (lambda <= 0) throw PreconditionError("rescaling factor must be positive");
  return Scale(scale.initial(), scale.run(), lambda * scale.t0(), scale.mass_per_dim() / lambda);
}

}  // namespace tracefold
