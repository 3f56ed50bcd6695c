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

#include "tracefold/folding.h"

#include <algorithm>
#include <set>
#include <string>

#include "tracefold/spectra.h"

namespace tracefold {

namespace {

void require_same_space(const CellSpace& x, const CellSpace& y, const char* what) {
  if (!x.same_as(y)) throw PreconditionError(std::string(what) + " must live on the same space version");
}

std::string index_label(const char* name, std::size_t i) { return std::string(name) + std::to_string(i + 1); }

}  // namespace

Folding::Folding(std::vector<Element> first, std::vector<Element> second)
    : first_(std::move(first)), second_(std::move(second)) {
  if (first_.empty() || first_.size() != second_.size()) {
    throw PreconditionError("a folding needs two member lists of equal positive length");
  }
}

Folding Folding::zero(const CellSpace& space, std::size_t k) {
  return Folding(std::vector<Element>(k, Element(space)), std::vector<Element>(k, Element(space)));
}

Element Folding::first_sum() const {
  Element sum(space());
  for (const auto& e : first_) sum += e;
  return sum;
}

Element Folding::second_sum() const {
  Element sum(space());
  for (const auto& e : second_) sum += e;
  return sum;
}

Projection Folding::support() const {
  std::set<CellId> cells;
  for (const auto* list : {&first_, &second_}) {
    for (const auto& e : *list) {
      for (const auto& [id, v] : e.coeffs()) cells.insert(id);
    }
  }
  return Projection(space(), std::move(cells));
}

Rational Folding::norm() const {
  Rational best = 0;
  for (const auto* list : {&first_, &second_}) {
    for (const auto& e : *list) best = std::max(best, sup_norm(e));
  }
  return best;
}

Folding Folding::negated() const {
  std::vector<Element> first, second;
  for (const auto& e : first_) first.push_back(-e);
  for (const auto& e : second_) second.push_back(-e);
  return Folding(std::move(first), std::move(second));
}

Folding lift(const Folding& f, const CellSpace& target) {
  std::vector<Element> first, second;
  for (const auto& e : f.first()) first.push_back(lift(e, target));
  for (const auto& e : f.second()) second.push_back(lift(e, target));
  return Folding(std::move(first), std::move(second));
}

Report validate_folding(const Folding& f) {
  Report report;
  for (std::size_t i = 0; i < f.k(); ++i) {
    if (!f.first()[i].space().same_as(f.space()) || !f.second()[i].space().same_as(f.space())) {
      report.add("members do not share one space version (index " + std::to_string(i + 1) + ")");
    }
  }
  if (!report.ok()) return report;
  for (std::size_t i = 0; i < f.k(); ++i) {
    for (std::size_t j = 0; j < f.k(); ++j) {
      if (!orthogonal(f.first()[i], f.second()[j])) {
        report.add(index_label("A", i) + " is not orthogonal to " + index_label("B", j));
      }
    }
  }
  for (std::size_t i = 0; i < f.k(); ++i) {
    if (!equivalent(f.first()[i], f.second()[i])) {
      report.add(index_label("A", i) + " is not equivalent to " + index_label("B", i));
    }
  }
  return report;
}

Folding folding_sum(std::span<const Folding> foldings) {
  if (foldings.empty()) throw PreconditionError("folding_sum needs at least one folding");
  const std::size_t k = foldings.front().k();
  std::vector<CellSpace> spaces;
  for (const auto& f : foldings) {
    if (f.k() != k) throw PreconditionError("folding_sum needs foldings of equal length");
    spaces.push_back(f.space());
  }
  const CellSpace common = finest(spaces);
  Folding sum = Folding::zero(common, k);
  std::vector<Element> first = sum.first(), second = sum.second();
  std::set<CellId> used;
  for (std::size_t n = 0; n < foldings.size(); ++n) {
    const Folding f = lift(foldings[n], common);
    const Projection s = f.support();
    for (CellId id : s.cells()) {
      if (!used.insert(id).second) {
        throw PreconditionError("folding supports overlap (folding " + std::to_string(n + 1) + ")");
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      first[i] += f.first()[i];
      second[i] += f.second()[i];
    }
  }
  return Folding(std::move(first), std::move(second));
}

Report validate_superprojection(const Superprojection& pi) {
  Report report;
  const Projection* ps[] = {&pi.p1, &pi.p2, &pi.p3, &pi.p4};
  for (const auto* p : ps) {
    if (!p->space().same_as(pi.p1.space())) {
      report.add("projections do not share one space version");
      return report;
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (!ps[i]->orthogonal_to(*ps[j])) {
        report.add("P" + std::to_string(i + 1) + " is not orthogonal to P" + std::to_string(j + 1));
      }
    }
  }
  if (pi.p1.dimension() != pi.p3.dimension()) report.add("D(P1) != D(P3)");
  if (pi.p2.dimension() != pi.p4.dimension()) report.add("D(P2) != D(P4)");
  return report;
}

Element mediator(const Projection& p) {
  std::map<CellId, Affine> coeffs;
  for (CellId id : p.cells()) coeffs.emplace(id, Affine{0, 1});
  return Element(p.space(), std::move(coeffs));
}

Folding gamma_folding(const Superprojection& pi, const Rational& alpha, const Rational& beta) {
  if (alpha <= 0 || beta <= 0) throw PreconditionError("alpha and beta must be positive");
  if (pi.p1.is_zero() || pi.p2.is_zero() || pi.p3.is_zero() || pi.p4.is_zero()) {
    throw PreconditionError("superprojection members must be nonzero");
  }
  const Report report = validate_superprojection(pi);
  if (!report.ok()) throw PreconditionError("invalid superprojection: " + report.failures.front());
  if (alpha * pi.p1.dimension() != beta * pi.p2.dimension()) {
    throw PreconditionError("type condition fails: alpha*D(P1) = " + to_string(alpha * pi.p1.dimension()) +
                            " but beta*D(P2) = " + to_string(beta * pi.p2.dimension()));
  }
  const Element m1 = mediator(pi.p1), m2 = mediator(pi.p2), m3 = mediator(pi.p3), m4 = mediator(pi.p4);
  Element a = alpha * pi.p1.element() + beta * m1 + alpha * m4;
  Element b = -(beta * m1) - alpha * m4;
  Element v = beta * pi.p2.element() + alpha * m2 + beta * m3;
  Element w = -(beta * m3) - alpha * m2;
  return Folding({std::move(a), std::move(b)}, {std::move(v), std::move(w)});
}

LocalFolding local_folding(const Element& x, const Projection& q, const Rational& beta, const Projection& p) {
  require_same_space(x.space(), q.space(), "X and Q");
  require_same_space(x.space(), p.space(), "X and P");
  if (beta <= 0) throw PreconditionError("beta must be positive");
  if (!x.is_step()) throw PreconditionError("X must be a step element");
  if (!x.is_positive()) throw PreconditionError("X must be positive");
  const Projection s = support(x);
  if (!s.leq(p)) throw PreconditionError("X must be supported under P");
  if (!q.leq(p)) throw PreconditionError("Q must lie under P");
  if (!s.orthogonal_to(q)) throw PreconditionError("X must be orthogonal to Q");
  if (quasitrace(x) != beta * q.dimension()) {
    throw PreconditionError("q(X) = " + to_string(quasitrace(x)) + " differs from beta*D(Q) = " +
                            to_string(beta * q.dimension()));
  }
  if (p.dimension() < 2 * (s.dimension() + q.dimension())) {
    throw PreconditionError("D(P) = " + to_string(p.dimension()) + " is below 2(D(s(X)) + D(Q)) = " +
                            to_string(2 * (s.dimension() + q.dimension())));
  }
  const CellSpace& space0 = x.space();
  if (x.is_zero()) return {Folding::zero(space0), {}, {}, Projection(space0), Projection(space0)};

  // Level sets of X in ascending value order.
  std::map<Rational, std::set<CellId>> levels;
  for (const auto& [id, v] : x.coeffs()) levels[v.a].insert(id);
  std::vector<Rational> values, lengths, q_masses;
  for (const auto& [value, cells] : levels) {
    Rational len = 0;
    for (CellId id : cells) len += space0.mass(id);
    values.push_back(value);
    lengths.push_back(len);
    q_masses.push_back(value * len / beta);
  }

  // Mirrors S' ~ s(X) and Q' ~ Q, then the per-step slices of each.
  const Rational mirror_dims[] = {s.dimension(), q.dimension()};
  const Carving mirrors = carve(p.minus(s).minus(q), mirror_dims);
  const Carving e_mirror = carve(mirrors.pieces[0], lengths);
  const Carving q_slices = carve(lift(q, e_mirror.rest.space()), q_masses);
  const Carving q_mirror_slices = carve(lift(mirrors.pieces[1], q_slices.rest.space()), q_masses);
  const CellSpace& space = q_mirror_slices.rest.space();

  std::vector<Folding> parts;
  std::vector<Superprojection> pieces;
  std::size_t j = 0;
  for (const auto& [value, cells] : levels) {
    Superprojection pi{lift(Projection(space0, cells), space), lift(q_slices.pieces[j], space),
                       lift(e_mirror.pieces[j], space), q_mirror_slices.pieces[j]};
    parts.push_back(gamma_folding(pi, value, beta));
    pieces.push_back(std::move(pi));
    ++j;
  }
  return {folding_sum(parts), std::move(values), std::move(pieces), lift(mirrors.pieces[0], space),
          lift(mirrors.pieces[1], space)};
}

namespace {

// Integrates step functions over sub-ranges of a scale whose space already
// realizes every breakpoint involved, so no further refinement occurs.
class RealizedScale {
 public:
  explicit RealizedScale(const Scale& scale) : scale_(scale) {
    Rational at = scale.t0();
    for (CellId id : scale.run()) {
      starts_.push_back(at);
      at += scale.space().mass(id) / scale.mass_per_dim();
    }
    starts_.push_back(at);
  }

  Element integrate(const StepFunction& f) const {
    auto first = std::lower_bound(starts_.begin(), starts_.end(), f.lo());
    if (first == starts_.end() || *first != f.lo()) throw PreconditionError("integration range is not realized");
    std::map<CellId, Affine> coeffs;
    std::size_t piece = 0;
    const auto& pieces = f.pieces();
    for (std::size_t i = static_cast<std::size_t>(first - starts_.begin()); i + 1 < starts_.size(); ++i) {
      if (starts_[i + 1] > f.hi()) {
        if (starts_[i] < f.hi()) throw PreconditionError("integration range is not realized");
        break;
      }
      while (piece < pieces.size() && pieces[piece].hi <= starts_[i]) ++piece;
      if (piece == pieces.size()) break;
      if (starts_[i + 1] > pieces[piece].hi) throw PreconditionError("integrand breakpoint is not realized");
      if (pieces[piece].value != 0) coeffs.emplace(scale_.run()[i], Affine{pieces[piece].value, 0});
    }
    return Element(scale_.space(), std::move(coeffs));
  }

 private:
  const Scale& scale_;
  std::vector<Rational> starts_;
};

}  // namespace

SmallPacking small_packing(const Element& x, const Projection& p, const Projection& q) {
  require_same_space(x.space(), p.space(), "X and P");
  require_same_space(x.space(), q.space(), "X and Q");
  if (!x.is_step()) throw PreconditionError("X must be a step element");
  if (q.is_zero()) throw PreconditionError("Q must be nonzero");
  if (!q.leq(p)) throw PreconditionError("Q must lie under P");
  if (!support(x).orthogonal_to(p)) throw PreconditionError("X must be orthogonal to P");

  SmallPacking out{Element(x.space()), Element(x.space()), Element(x.space()), Element(x.space()),
                   Element(x.space()), 0, 0, {}, {}};
  const Rational s = support(x).dimension();
  if (s == 0) return out;

  const Rational lambda = p.dimension();
  const Rational beta = q.dimension();
  // Smallest n >= 1 with 2n >= D(s(X)) / D(Q).
  const mpz_class n_min = ceil(Rational(s / (2 * beta)));
  const std::size_t n = std::max<std::size_t>(1, n_min.get_ui());
  const Rational alpha = s / (2 * n);
  out.n = n;
  out.alpha = alpha;

  // E runs s(X) by value and then the first alpha of a full scale of P that
  // starts with Q, measured in ambient dimensions.
  const Scale f_scale = support_scale(x);
  std::vector<CellId> g_run = q.ids();
  for (CellId id : p.minus(q).ids()) g_run.push_back(id);
  const Scale g(Projection(x.space()), std::move(g_run), 0, lambda);
  const Scale g_alpha = restrict(rescale_dims(g, lambda), 0, alpha);
  const Scale e = concat(lift(f_scale, g_alpha.space()), g_alpha);
  const StepFunction f = profile(lift(f_scale, g_alpha.space()), lift(x, g_alpha.space()));

  std::vector<StepFunction> gs;
  for (std::size_t k = 1; k <= 2 * n; ++k) {
    StepFunction fk = f.restricted((k - 1) * alpha, k * alpha);
    gs.push_back(k == 1 ? fk : fk + gs.back().translated(alpha));
  }

  std::set<Rational> cuts;
  for (std::size_t k = 1; k <= 2 * n; ++k) {
    cuts.insert(k * alpha);
    for (const auto& t : gs[k - 1].knots()) {
      cuts.insert(t);
      cuts.insert(t + alpha);
    }
  }
  const std::vector<Rational> cut_list(cuts.begin(), cuts.end());
  const Scale refined = refine(e, cut_list);
  const RealizedScale realized(refined);
  const CellSpace& space = refined.space();

  Element a1(space), a2(space), b1(space), b2(space);
  for (std::size_t k = 1; k <= 2 * n; ++k) {
    out.v.push_back(realized.integrate(gs[k - 1]));
    out.w.push_back(realized.integrate(gs[k - 1].translated(alpha)));
    (k % 2 == 1 ? a1 : a2) += out.v.back();
    (k % 2 == 1 ? b1 : b2) += out.w.back();
  }
  out.a1 = std::move(a1);
  out.a2 = std::move(a2);
  out.b1 = std::move(b1);
  out.b2 = std::move(b2);
  out.y = out.w.back();
  return out;
}

Report validate_small_packing(const SmallPacking& sp, const Element& x, const Projection& p, const Projection& q) {
  Report report;
  const CellSpace& space = sp.a1.space();
  for (const Element* e : {&sp.a2, &sp.b1, &sp.b2, &sp.y}) {
    if (!e->space().same_as(space)) {
      report.add("(i) outputs do not share one space version");
      return report;
    }
  }
  const Element xs = lift(x, space);
  const Projection ps = lift(p, space);
  const Projection qs = lift(q, space);
  if (!orthogonal(sp.a1, sp.a2)) report.add("(ii) A1 is not orthogonal to A2");
  if (!orthogonal(sp.b1, sp.b2)) report.add("(ii) B1 is not orthogonal to B2");
  if (!orthogonal(sp.a1, sp.b1)) report.add("(ii) A1 is not orthogonal to B1");
  if (!orthogonal(sp.a2, sp.b2)) report.add("(ii) A2 is not orthogonal to B2");
  if (!equivalent(sp.a1, sp.b1)) report.add("(iii) A1 is not equivalent to B1");
  if (!equivalent(sp.a2, sp.b2)) report.add("(iii) A2 is not equivalent to B2");
  if (!support(sp.a1).orthogonal_to(ps)) report.add("(iv) A1 is not orthogonal to P");
  if (!support(sp.a2).orthogonal_to(ps)) report.add("(iv) A2 is not orthogonal to P");
  if (!support(sp.b1).orthogonal_to(ps)) report.add("(iv) B1 is not orthogonal to P");
  if (!support(sp.y).leq(qs) || !sp.y.is_step()) report.add("(v) Y is not a step element under Q");
  if (!(compress(sp.b2, ps) == sp.y)) report.add("(vi) B2 compressed to P differs from Y");
  if (!(sp.a1 + sp.a2 - sp.b1 - sp.b2 + sp.y == xs)) report.add("(vii) X != A1 + A2 - B1 - B2 + Y");
  return report;
}

}  // namespace tracefold
