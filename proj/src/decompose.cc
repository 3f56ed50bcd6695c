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

#include "tracefold/decompose.h"

#include <algorithm>
#include <stdexcept>

#include "tracefold/spectra.h"

namespace tracefold {

namespace {

constexpr const char* kPacking = "small packing";
constexpr const char* kFolding = "symmetric folding";

void require_trace_zero(const Element& x) {
  if (!x.is_step()) throw PreconditionError("X must be a step element");
  const Rational q = quasitrace(x);
  if (q != 0) throw PreconditionError("q(X) = " + to_string(q) + " is not zero");
}

const Element* find_entry(const std::vector<TrailEntry>& trail, const std::string& name) {
  for (const auto& entry : trail) {
    if (entry.name == name) return &entry.value;
  }
  return nullptr;
}

}  // namespace

SymmetricFolding fold_as_symmetric(const Element& x, const Projection& unit) {
  if (!x.space().same_as(unit.space())) throw PreconditionError("X and U must live on the same space version");
  require_trace_zero(x);
  const Projection s = support(x);
  if (!s.leq(unit)) throw PreconditionError("X must be supported under U");
  if (2 * s.dimension() >= unit.dimension()) {
    throw PreconditionError("D(s(X)) = " + to_string(s.dimension()) + " must be below D(U)/2 = " +
                            to_string(unit.dimension() / 2));
  }
  if (x.is_zero()) return {Element(x.space()), Folding::zero(x.space()), 0, unit.dimension() / 4};

  const SignedParts parts = pos_neg_parts(x);
  const Projection e1 = support(parts.positive);
  const Projection e2 = support(parts.negative);
  const Rational delta = (unit.dimension() - 2 * e1.dimension() - 2 * e2.dimension()) / 4;
  const Rational dims[] = {e1.dimension(), e2.dimension(), delta, delta, delta, delta};
  const Carving c = carve(lift(unit, parts.positive.space()).minus(e1).minus(e2), dims);
  const CellSpace& s1 = c.rest.space();
  const Projection e1s = lift(e1, s1), e2s = lift(e2, s1);
  const Projection& e3 = c.pieces[0];
  const Projection& e4 = c.pieces[1];
  const Projection& q1 = c.pieces[2];
  const Projection& q2 = c.pieces[3];
  const Projection& q3 = c.pieces[4];
  const Projection& q4 = c.pieces[5];
  const Element pos = lift(parts.positive, s1);
  const Rational beta = quasitrace(pos) / delta;

  const Projection p1 = e1s.join(e3).join(q1).join(q2);
  const Projection p2 = e2s.join(e4).join(q3).join(q4);
  const LocalFolding phi = local_folding(pos, q1, beta, p1);
  const CellSpace& s2 = phi.folding.space();
  const LocalFolding gamma =
      local_folding(lift(parts.negative, s2), lift(q3, s2), beta, lift(p2, s2));
  const Folding pieces[] = {phi.folding, gamma.folding.negated()};
  Folding sum = folding_sum(pieces);
  const CellSpace& s3 = sum.space();
  Element sym = beta * lift(q1, s3).element() - beta * lift(q3, s3).element();
  return {std::move(sym), std::move(sum), beta, delta};
}

SymmetricFolding fold_as_symmetric(const Element& x) { return fold_as_symmetric(x, Projection::unit(x.space())); }

std::size_t cell_budget(std::size_t input_cells, std::size_t n) { return 8 * (input_cells + 4) * (n + 2); }

Decomposition three_symmetric(const Element& x) {
  require_trace_zero(x);
  const Projection sx = support(x);
  if (sx.dimension() >= x.space().total_mass()) {
    throw PreconditionError("X has full support; use stabilize_decompose");
  }
  if (x.is_zero()) {
    Decomposition d{x, Element(x.space()), Element(x.space()), Element(x.space()), false, {}, {}};
    d.report = verify_decomposition(d);
    return d;
  }

  const Projection p = sx.complement();
  const Rational quarter[] = {p.dimension() / 4};
  const Carving c = carve(p, quarter);
  const CellSpace& s1 = c.rest.space();
  const Projection p1 = lift(p, s1);
  const SmallPacking sp = small_packing(lift(x, s1), p1, c.pieces[0]);
  const CellSpace& s2 = sp.y.space();
  const SymmetricFolding sym = fold_as_symmetric(sp.y, lift(p1, s2));
  const CellSpace& s3 = sym.folding.space();

  const Element a1 = lift(sp.a1, s3), a2 = lift(sp.a2, s3), b1 = lift(sp.b1, s3), b2 = lift(sp.b2, s3);
  const Element y = lift(sp.y, s3);
  const Element& y1 = sym.folding.first()[0];
  const Element& y2 = sym.folding.first()[1];
  const Element& s_1 = sym.folding.second()[0];
  const Element& s_2 = sym.folding.second()[1];

  Decomposition d{lift(x, s3), (a1 - b1) + (y1 - s_1), (a2 - b2) + sym.s, y2 - s_2, false, {}, {}};
  d.trail = {{"A1", kPacking, a1},      {"A2", kPacking, a2},      {"B1", kPacking, b1},
             {"B2", kPacking, b2},      {"Y", kPacking, y},        {"Y1", kFolding, y1},
             {"Y2", kFolding, y2},      {"S1", kFolding, s_1},     {"S2", kFolding, s_2},
             {"S", kFolding, sym.s}};
  d.report = verify_decomposition(d);
  d.report.merge(check_trail(d), "trail: ");

  const std::size_t budget = cell_budget(x.space().size(), sp.n);
  if (s3.size() > budget) {
    throw std::logic_error("decomposition used " + std::to_string(s3.size()) + " cells, above the budget of " +
                           std::to_string(budget));
  }
  return d;
}

Element embed_corner(const Element& x) {
  const CellSpace& space = x.space();
  std::vector<std::pair<CellId, Rational>> cells;
  CellId next = 0;
  for (const CellPtr& c : space.cells()) {
    cells.emplace_back(c->id, c->mass / 2);
    next = std::max(next, c->id + 1);
  }
  cells.emplace_back(next, space.total_mass() / 2);
  const CellSpace doubled = CellSpace::from_cells(space.total_mass(), cells);
  return Element(doubled, x.coeffs());
}

Decomposition stabilize_decompose(const Element& x) {
  require_trace_zero(x);
  Decomposition d = three_symmetric(embed_corner(x));
  d.stabilized = true;
  return d;
}

Report verify_decomposition(const Element& x, const Element& x1, const Element& x2, const Element& x3) {
  Report report;
  const CellSpace& space = x1.space();
  if (!x2.space().same_as(space) || !x3.space().same_as(space)) {
    report.add("summands do not share one space version");
    return report;
  }
  Element target(space);
  try {
    target = lift(x, space);
  } catch (const PreconditionError& e) {
    report.add(std::string("input cannot be remapped onto the summands' space: ") + e.what());
    return report;
  }
  if (!(x1 + x2 + x3 == target)) report.add("X1 + X2 + X3 != X");

  const unsigned max_order = 2 * static_cast<unsigned>(distribution(x).atoms().size()) + 1;
  const Element* summands[] = {&x1, &x2, &x3};
  for (int i = 0; i < 3; ++i) {
    const std::string name = "X" + std::to_string(i + 1);
    const SpectralDistribution dist = distribution(*summands[i]);
    if (!(dist == dist.mirrored())) report.add(name + " is not spectrally symmetric");
    if (quasitrace(*summands[i]) != 0) report.add("q(" + name + ") != 0");
    for (unsigned k = 1; k <= max_order; k += 2) {
      if (dist_moment(dist, k) != 0) {
        report.add(name + " has nonzero odd moment of order " + std::to_string(k));
        break;
      }
    }
  }
  return report;
}

Report verify_decomposition(const Decomposition& d) { return verify_decomposition(d.input, d.x1, d.x2, d.x3); }

Report check_trail(const Decomposition& d) {
  Report report;
  if (d.trail.empty()) return report;
  const char* names[] = {"A1", "A2", "B1", "B2", "Y", "Y1", "Y2", "S1", "S2", "S"};
  std::map<std::string, const Element*> at;
  for (const char* name : names) {
    const Element* e = find_entry(d.trail, name);
    if (e == nullptr) {
      report.add(std::string("missing trail entry ") + name);
      return report;
    }
    at[name] = e;
  }
  const Element& x = d.input;
  if (!(*at["A1"] + *at["A2"] - *at["B1"] - *at["B2"] + *at["Y"] == x)) {
    report.add("X != A1 + A2 - B1 - B2 + Y");
  }
  if (!((*at["Y1"] - *at["S1"]) + (*at["Y2"] - *at["S2"]) + *at["S"] == *at["Y"])) {
    report.add("Y != (Y1 - S1) + (Y2 - S2) + S");
  }
  if (!is_spectrally_symmetric(*at["S"])) report.add("S is not spectrally symmetric");
  return report;
}

}  // namespace tracefold
