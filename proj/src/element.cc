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

#include "tracefold/element.h"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace tracefold {

namespace {

void require_same_space(const CellSpace& x, const CellSpace& y) {
  if (!x.same_as(y)) {
    throw PreconditionError("space version mismatch (" + std::to_string(x.version()) + " vs " +
                            std::to_string(y.version()) + "); lift onto a common refinement first");
  }
}

// Value of a parent's affine function restricted to one of its children.
Affine descend(const Affine& v, const Cell& child) {
  switch (child.kind) {
    case SplitKind::kCoordLeft:
      return {v.a, v.b * child.param};
    case SplitKind::kCoordRight:
      return {v.a + v.b * child.param, v.b * (1 - child.param)};
    default:
      return v;
  }
}

}  // namespace

Element::Element(CellSpace space, std::map<CellId, Affine> coeffs) : space_(std::move(space)) {
  for (auto& [id, v] : coeffs) {
    space_.cell(id);  // throws for unknown cells
    if (!v.is_zero()) coeffs_.emplace(id, std::move(v));
  }
}

Affine Element::at(CellId cell) const {
  auto it = coeffs_.find(cell);
  return it == coeffs_.end() ? Affine{} : it->second;
}

bool Element::is_step() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& kv) { return kv.second.b == 0; });
}

bool Element::is_projection() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const auto& kv) { return kv.second.b == 0 && kv.second.a == 1; });
}

bool Element::is_positive() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& kv) { return kv.second.min() >= 0; });
}

Element Element::operator-() const {
  Element out(space_);
  for (const auto& [id, v] : coeffs_) out.coeffs_.emplace(id, Affine{-v.a, -v.b});
  return out;
}

Element& Element::operator+=(const Element& other) {
  require_same_space(space_, other.space_);
  for (const auto& [id, v] : other.coeffs_) {
    auto [it, inserted] = coeffs_.emplace(id, v);
    if (!inserted) {
      it->second.a += v.a;
      it->second.b += v.b;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }
  return *this;
}

Element& Element::operator-=(const Element& other) { return *this += -other; }

Element& Element::operator*=(const Rational& scalar) {
  if (scalar == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [id, v] : coeffs_) {
    v.a *= scalar;
    v.b *= scalar;
  }
  return *this;
}

bool operator==(const Element& x, const Element& y) { return x.space_.same_as(y.space_) && x.coeffs_ == y.coeffs_; }

Projection::Projection(CellSpace space, std::set<CellId> cells) : space_(std::move(space)), cells_(std::move(cells)) {
  for (CellId id : cells_) space_.cell(id);
}

Projection Projection::from_element(const Element& e) {
  if (!e.is_projection()) throw PreconditionError("element is not a projection");
  std::set<CellId> cells;
  for (const auto& [id, v] : e.coeffs()) cells.insert(id);
  return Projection(e.space(), std::move(cells));
}

Projection Projection::unit(const CellSpace& space) {
  std::set<CellId> cells;
  for (const auto& c : space.cells()) cells.insert(c->id);
  return Projection(space, std::move(cells));
}

Rational Projection::dimension() const {
  Rational d = 0;
  for (CellId id : cells_) d += space_.mass(id);
  return d;
}

Element Projection::element() const {
  std::map<CellId, Affine> coeffs;
  for (CellId id : cells_) coeffs.emplace(id, Affine{1, 0});
  return Element(space_, std::move(coeffs));
}

bool Projection::leq(const Projection& other) const {
  require_same_space(space_, other.space_);
  return std::includes(other.cells_.begin(), other.cells_.end(), cells_.begin(), cells_.end());
}

bool Projection::orthogonal_to(const Projection& other) const {
  require_same_space(space_, other.space_);
  const auto& small = cells_.size() < other.cells_.size() ? cells_ : other.cells_;
  const auto& large = cells_.size() < other.cells_.size() ? other.cells_ : cells_;
  return std::none_of(small.begin(), small.end(), [&](CellId id) { return large.count(id) != 0; });
}

Projection Projection::join(const Projection& other) const {
  require_same_space(space_, other.space_);
  std::set<CellId> cells = cells_;
  cells.insert(other.cells_.begin(), other.cells_.end());
  return Projection(space_, std::move(cells));
}

Projection Projection::minus(const Projection& other) const {
  require_same_space(space_, other.space_);
  std::set<CellId> cells;
  std::set_difference(cells_.begin(), cells_.end(), other.cells_.begin(), other.cells_.end(),
                      std::inserter(cells, cells.end()));
  return Projection(space_, std::move(cells));
}

Projection Projection::complement() const { return unit(space_).minus(*this); }

bool operator==(const Projection& x, const Projection& y) { return x.space_.same_as(y.space_) && x.cells_ == y.cells_; }

Element lift(const Element& e, const CellSpace& target) {
  if (e.space().same_as(target)) return Element(target, e.coeffs());
  if (target.total_mass() != e.space().total_mass()) throw PreconditionError("lift across different total masses");
  // Walk each target cell up its lineage until a cell of the source version
  // is met, then push the source value back down through the splits.
  std::unordered_map<const Cell*, Affine> memo;
  std::map<CellId, Affine> coeffs;
  for (const CellPtr& c : target.cells()) {
    std::vector<const Cell*> chain;
    const Cell* cur = c.get();
    Affine value;
    bool found = false;
    while (cur != nullptr) {
      if (auto m = memo.find(cur); m != memo.end()) {
        value = m->second;
        found = true;
        break;
      }
      if (e.space().contains(*cur)) {
        value = e.at(cur->id);
        found = true;
        break;
      }
      chain.push_back(cur);
      cur = cur->parent.get();
    }
    if (!found) {
      throw PreconditionError("space version " + std::to_string(target.version()) +
                              " does not refine version " + std::to_string(e.space().version()));
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      value = descend(value, **it);
      memo.emplace(*it, value);
    }
    if (!value.is_zero()) coeffs.emplace(c->id, value);
  }
  return Element(target, std::move(coeffs));
}

Projection lift(const Projection& p, const CellSpace& target) {
  if (p.space().same_as(target)) return Projection(target, p.cells());
  return Projection::from_element(lift(p.element(), target));
}

Element apply(const Refinement& refinement, const Element& e) {
  const CellSpace& target = refinement.target();
  std::map<CellId, Affine> coeffs = e.coeffs();
  auto it = coeffs.find(refinement.parent());
  if (it != coeffs.end()) {
    const Affine v = it->second;
    coeffs.erase(it);
    coeffs.emplace(refinement.left(), descend(v, target.cell(refinement.left())));
    coeffs.emplace(refinement.right(), descend(v, target.cell(refinement.right())));
  }
  return Element(target, std::move(coeffs));
}

CellSpace finest(std::span<const CellSpace> spaces) {
  if (spaces.empty()) throw PreconditionError("no spaces given");
  const CellSpace* best = &spaces.front();
  for (const auto& s : spaces) {
    if (s.version() > best->version()) best = &s;
  }
  for (const auto& s : spaces) ancestry(s, *best);  // throws when not a refinement
  return *best;
}

Element from_atoms(const CellSpace& space, std::span<const Atom> atoms) {
  std::map<Rational, Rational> merged;
  Rational budget = 0;
  for (const auto& atom : atoms) {
    if (atom.mass <= 0) throw PreconditionError("atom mass must be positive, got " + to_string(atom.mass));
    budget += atom.mass;
    if (atom.value != 0) merged[atom.value] += atom.mass;
  }
  if (budget > space.total_mass()) {
    throw PreconditionError("atom masses sum to " + to_string(budget) + ", exceeding total mass " +
                            to_string(space.total_mass()));
  }
  std::vector<Rational> masses;
  for (const auto& [value, mass] : merged) masses.push_back(mass);
  Carving carving = carve(Projection::unit(space), masses);
  const CellSpace& refined = carving.rest.space();
  std::map<CellId, Affine> coeffs;
  std::size_t i = 0;
  for (const auto& [value, mass] : merged) {
    for (CellId id : carving.pieces[i].cells()) coeffs.emplace(id, Affine{value, 0});
    ++i;
  }
  return Element(refined, std::move(coeffs));
}

Element linear_combine(const Rational& alpha, const Element& a, const Rational& beta, const Element& b) {
  require_same_space(a.space(), b.space());
  return alpha * a + beta * b;
}

Rational quasitrace(const Element& e) {
  Rational q = 0;
  for (const auto& [id, v] : e.coeffs()) q += e.space().mass(id) * (v.a + v.b / 2);
  return q;
}

Rational moment(const Element& e, unsigned k) {
  if (k == 0) throw PreconditionError("moment order must be >= 1");
  Rational sum = 0;
  for (const auto& [id, v] : e.coeffs()) {
    const Rational& m = e.space().mass(id);
    if (v.b == 0) {
      sum += m * pow(v.a, k);
    } else {
      sum += m * (pow(v.a + v.b, k + 1) - pow(v.a, k + 1)) / ((k + 1) * v.b);
    }
  }
  return sum;
}

SignedParts pos_neg_parts(const Element& e) {
  Element current = e;
  std::vector<std::pair<CellId, Rational>> crossings;
  for (const auto& [id, v] : e.coeffs()) {
    if (v.b != 0 && v.min() < 0 && v.max() > 0) crossings.emplace_back(id, Rational(-v.a / v.b));
  }
  for (const auto& [id, u] : crossings) {
    auto [space, ref] = current.space().split_coord(id, u);
    current = apply(ref, current);
  }
  std::map<CellId, Affine> pos, neg;
  for (const auto& [id, v] : current.coeffs()) {
    if (v.min() >= 0) {
      pos.emplace(id, v);
    } else {
      neg.emplace(id, Affine{-v.a, -v.b});
    }
  }
  return {Element(current.space(), std::move(pos)), Element(current.space(), std::move(neg))};
}

Projection support(const Element& e) {
  std::set<CellId> cells;
  for (const auto& [id, v] : e.coeffs()) cells.insert(id);
  return Projection(e.space(), std::move(cells));
}

bool orthogonal(const Element& x, const Element& y) {
  require_same_space(x.space(), y.space());
  const auto& small = x.coeffs().size() < y.coeffs().size() ? x.coeffs() : y.coeffs();
  const auto& large = x.coeffs().size() < y.coeffs().size() ? y.coeffs() : x.coeffs();
  return std::none_of(small.begin(), small.end(), [&](const auto& kv) { return large.count(kv.first) != 0; });
}

Rational sup_norm(const Element& e) {
  Rational best = 0;
  for (const auto& [id, v] : e.coeffs()) best = std::max({best, Rational(abs(v.a)), Rational(abs(v.at_end()))});
  return best;
}

Element copy_onto(const Element& e, const Projection& target) {
  require_same_space(e.space(), target.space());
  if (!e.is_step()) throw PreconditionError("copy_onto needs a step element");
  const Projection s = support(e);
  if (!s.orthogonal_to(target)) throw PreconditionError("target must be orthogonal to the support");
  if (target.dimension() < s.dimension()) throw PreconditionError("target is smaller than the support");

  std::map<Rational, Rational> profile;
  for (const auto& [id, v] : e.coeffs()) profile[v.a] += e.space().mass(id);
  std::vector<Rational> masses;
  for (const auto& [value, mass] : profile) masses.push_back(mass);
  Carving carving = carve(target, masses);
  std::map<CellId, Affine> coeffs;
  std::size_t i = 0;
  for (const auto& [value, mass] : profile) {
    for (CellId id : carving.pieces[i++].cells()) coeffs.emplace(id, Affine{value, 0});
  }
  return Element(carving.rest.space(), std::move(coeffs));
}

Element compress(const Element& e, const Projection& p) {
  require_same_space(e.space(), p.space());
  std::map<CellId, Affine> coeffs;
  for (const auto& [id, v] : e.coeffs()) {
    if (p.contains(id)) coeffs.emplace(id, v);
  }
  return Element(e.space(), std::move(coeffs));
}

PiecewiseAffine::PiecewiseAffine(std::vector<Knot> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw PreconditionError("piecewise-affine map needs at least one knot");
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (knots_[i].x <= knots_[i - 1].x) throw PreconditionError("knots must be strictly increasing");
  }
}

std::pair<Rational, Rational> PiecewiseAffine::segment_at(const Rational& x) const {
  if (knots_.size() == 1) return {0, knots_[0].y};
  // Segment i spans [x_i, x_{i+1}); the outer segments extend to infinity.
  std::size_t i = 0;
  while (i + 2 < knots_.size() && x >= knots_[i + 1].x) ++i;
  const Knot& l = knots_[i];
  const Knot& r = knots_[i + 1];
  Rational slope = (r.y - l.y) / (r.x - l.x);
  return {slope, l.y - slope * l.x};
}

Rational PiecewiseAffine::operator()(const Rational& x) const {
  auto [slope, intercept] = segment_at(x);
  return slope * x + intercept;
}

Element apply(const PiecewiseAffine& phi, const Element& e) {
  Element current = e;
  for (const auto& [id, v] : e.coeffs()) {
    if (v.b == 0) continue;
    std::vector<Rational> cuts;
    for (const auto& k : phi.knots()) {
      Rational u = (k.x - v.a) / v.b;
      if (u > 0 && u < 1) cuts.push_back(u);
    }
    std::sort(cuts.begin(), cuts.end());
    CellId cell = id;
    Rational done = 0;
    for (const auto& u : cuts) {
      auto [space, ref] = current.space().split_coord(cell, (u - done) / (1 - done));
      current = apply(ref, current);
      cell = ref.right();
      done = u;
    }
  }
  std::map<CellId, Affine> coeffs;
  for (const auto& c : current.space().cells()) {
    const Affine v = current.at(c->id);
    auto [slope, intercept] = phi.segment_at(v.a + v.b / 2);
    coeffs.emplace(c->id, Affine{slope * v.a + intercept, slope * v.b});
  }
  return Element(current.space(), std::move(coeffs));
}

Carving carve(const Projection& available, std::span<const Rational> masses) {
  std::vector<Rational> cuts;
  Rational total = 0;
  for (const auto& m : masses) {
    if (m < 0) throw PreconditionError("carved dimensions must be non-negative");
    total += m;
    cuts.push_back(total);
  }
  if (total > available.dimension()) {
    throw PreconditionError("cannot carve dimension " + to_string(total) + " out of " +
                            to_string(available.dimension()));
  }
  const std::vector<CellId> run = available.ids();
  RunSlices slices = slice_run(available.space(), run, cuts);
  Carving out{{}, Projection(slices.space)};
  for (std::size_t i = 0; i < masses.size(); ++i) {
    out.pieces.emplace_back(slices.space, std::set<CellId>(slices.segments[i].begin(), slices.segments[i].end()));
  }
  out.rest = Projection(slices.space, std::set<CellId>(slices.segments.back().begin(), slices.segments.back().end()));
  return out;
}

}  // namespace tracefold
