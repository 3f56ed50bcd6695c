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

// Acceptance run: one PASS/FAIL line per criterion. A criterion passes when
// every exact check holds and it finishes inside its time limit.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "support/generators.h"
#include "support/instances.h"
#include "support/oracle.h"
#include "tracefold/decompose.h"
#include "tracefold/folding.h"
#include "tracefold/scales.h"
#include "tracefold/spectra.h"

namespace tracefold {
namespace {

/// An exact moment together with a way to estimate it in floating point.
struct OracleCase {
  Rational exact;
  std::function<testing::Estimate()> estimate;
};

class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failure_.empty()) failure_ = what;
  }
  bool ok() const { return failure_.empty(); }
  const std::string& failure() const { return failure_; }
  std::size_t checks() const { return checks_; }

 private:
  std::size_t checks_ = 0;
  std::string failure_;
};

std::vector<OracleCase>& oracle_cases() {
  static std::vector<OracleCase> cases;
  return cases;
}

void record(const Rational& exact, const std::shared_ptr<const Element>& e, unsigned k) {
  oracle_cases().push_back({exact, [e, k] { return testing::quad_moment(*e, k); }});
}

void record(const Rational& exact, const std::shared_ptr<const SpectralDistribution>& d, unsigned k) {
  oracle_cases().push_back({exact, [d, k] { return testing::quad_moment(*d, k); }});
}

void record(const Rational& exact, const std::shared_ptr<const QuantileFunction>& w, unsigned k) {
  oracle_cases().push_back({exact, [w, k] { return testing::quad_moment(*w, k); }});
}

template <typename T>
std::shared_ptr<const T> share(T value) {
  return std::make_shared<const T>(std::move(value));
}

std::vector<CellId> all_ids(const CellSpace& space) {
  std::vector<CellId> ids;
  for (const auto& c : space.cells()) ids.push_back(c->id);
  return ids;
}

void mediator_moments(Checker& check) {
  const CellSpace space = CellSpace::create(1);
  const auto m = share(mediator(Projection::unit(space)));
  for (unsigned k = 1; k <= 20; ++k) {
    const Rational q = moment(*m, k);
    check.expect(q == Rational(1, k + 1), "q(M^" + std::to_string(k) + ") != 1/(k+1)");
    record(q, m, k);
  }
}

void gamma_identities(Checker& check) {
  testing::Gen gen(1001);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = testing::random_gamma_instance(gen);
    const Folding g = gamma_folding(inst.pi, inst.alpha, inst.beta);
    check.expect(validate_folding(g).ok(), "gamma folding failed validation");
    const Rational a = inst.pi.p2.dimension(), b = inst.pi.p1.dimension();
    const Rational lambda = a / inst.alpha;
    const auto av = share(g.first()[0]), bv = share(g.first()[1]);
    const auto vv = share(g.second()[0]), wv = share(g.second()[1]);
    for (unsigned k = 1; k <= 12; ++k) {
      const Rational ak = lambda * pow(inst.alpha + inst.beta, k + 1) / (k + 1);
      const Rational bk = (k % 2 == 0 ? 1 : -1) * (pow(inst.alpha, k) * a + pow(inst.beta, k) * b) / (k + 1);
      const Rational ma = moment(*av, k), mv = moment(*vv, k), mb = moment(*bv, k), mw = moment(*wv, k);
      check.expect(ma == ak && mv == ak, "A or V moment differs from the closed form");
      check.expect(mb == bk && mw == bk, "B or W moment differs from the closed form");
      record(ma, av, k);
      record(mv, vv, k);
      record(mb, bv, k);
      record(mw, wv, k);
    }
  }
}

void moment_quantile(Checker& check) {
  testing::Gen gen(1002);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = share(from_atoms(testing::random_space(gen, static_cast<std::size_t>(gen.range(1, 4))),
                                    testing::random_atoms(gen, 32, 1)));
    const auto w = share(quantile(*a));
    for (unsigned k = 1; k <= 10; ++k) {
      const Rational m = moment(*a, k), qm = quantile_moment(*w, k);
      check.expect(m == qm, "moment != quantile moment at k = " + std::to_string(k));
      record(m, a, k);
      record(qm, w, k);
    }
  }
}

void riemann_calculus(Checker& check) {
  testing::Gen gen(1003);
  for (int trial = 0; trial < 100; ++trial) {
    const CellSpace space = testing::random_space(gen, 4);
    const Scale base = make_scale(space, all_ids(space));
    const StepFunction f = testing::random_step(gen, 0, 1, 5);
    const StepFunction g = testing::random_step(gen, 0, 1, 5);
    std::vector<Rational> knots = f.knots();
    for (const auto& t : g.knots()) knots.push_back(t);
    const Scale e = refine(base, knots);

    const auto fi = share(riemann_integral(e, f));
    const Element gi = riemann_integral(e, g);
    check.expect(riemann_integral(e, f + g) == *fi + gi, "additivity");
    const Rational s = gen.rational(-3, 3, 4);
    check.expect(riemann_integral(e, s * f) == s * *fi, "homogeneity");
    for (unsigned k = 1; k <= 8; ++k) {
      const Rational m = moment(*fi, k);
      check.expect(m == quasitrace(riemann_integral(e, f.power(k))), "power identity");
      record(m, fi, k);
    }
    Rational sup = 0;
    for (const auto& p : f.pieces()) sup = std::max(sup, Rational(abs(p.value)));
    check.expect(sup_norm(*fi) <= sup, "norm bound");

    std::vector<StepFunction::Piece> noisy;
    for (const auto& p : f.pieces()) {
      const Rational mid = (p.lo + p.hi) / 2;
      noisy.push_back({p.lo, mid, p.value});
      noisy.push_back({mid, mid, p.value + 17});
      noisy.push_back({mid, p.hi, p.value});
    }
    check.expect(riemann_integral(e, StepFunction(0, 1, noisy)) == *fi, "null-set insensitivity");
  }
}

void local_folding_soundness(Checker& check) {
  testing::Gen gen(1004);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = testing::random_local_instance(gen, 64);
    const LocalFolding lf = local_folding(inst.x, inst.q, inst.beta, inst.p);
    const Folding& f = lf.folding;
    const CellSpace& space = f.space();
    check.expect(validate_folding(f).ok(), "local folding failed validation");
    check.expect(f.first_sum() == lift(inst.x, space), "A + B != X");
    check.expect(f.second_sum() == inst.beta * lift(inst.q, space).element(), "V + W != beta Q");
    check.expect(f.support().leq(lift(inst.p, space)), "s(Phi) not under P");
    for (std::size_t j = 0; j < 2; ++j) {
      const auto first = share(f.first()[j]), second = share(f.second()[j]);
      for (unsigned k = 1; k <= 4; ++k) {
        const Rational m1 = moment(*first, k), m2 = moment(*second, k);
        check.expect(m1 == m2, "folded pair moments differ");
        record(m1, first, k);
        record(m2, second, k);
      }
    }
  }
}

void small_packing_soundness(Checker& check) {
  testing::Gen gen(1005);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = testing::random_packing_instance(gen, 8);
    const SmallPacking sp = small_packing(inst.x, inst.p, inst.q);
    const Report r = validate_small_packing(sp, inst.x, inst.p, inst.q);
    check.expect(r.ok(), r.ok() ? "" : r.failures.front());
    const CellSpace& space = sp.y.space();
    check.expect(sp.a1 + sp.a2 - sp.b1 - sp.b2 + sp.y == lift(inst.x, space), "X != A1 + A2 - B1 - B2 + Y");
    const auto y = share(sp.y);
    const Rational qy = moment(*y, 1);
    check.expect(qy == quasitrace(inst.x), "q(Y) != q(X)");
    record(qy, y, 1);
    for (const Element* e : {&sp.a1, &sp.a2, &sp.b1, &sp.b2}) {
      const auto shared = share(*e);
      for (unsigned k = 1; k <= 3; ++k) record(moment(*shared, k), shared, k);
    }
  }
}

void check_decomposition(Checker& check, const Decomposition& d) {
  const Report r = verify_decomposition(d);
  check.expect(r.ok(), r.ok() ? "" : r.failures.front());
  for (const Element* e : {&d.x1, &d.x2, &d.x3}) {
    const auto dist = share(distribution(*e));
    for (unsigned k = 1; k <= 7; k += 2) {
      const Rational m = dist_moment(*dist, k);
      check.expect(m == 0, "odd moment of a summand is nonzero");
      record(m, dist, k);
    }
  }
}

void three_symmetric_end_to_end(Checker& check) {
  testing::Gen gen(1006);
  for (int trial = 0; trial < 100; ++trial) {
    const Rational s = ratio(gen.range(1, 63), 64);
    const Element x = from_atoms(testing::random_space(gen, static_cast<std::size_t>(gen.range(1, 3))),
                                 testing::random_trace_zero_atoms(gen, 8, s));
    check_decomposition(check, three_symmetric(x));
  }
  for (int trial = 0; trial < 10; ++trial) {
    const Element x = from_atoms(CellSpace::create(1), testing::random_trace_zero_atoms(gen, 8, 1));
    check.expect(support(x).dimension() == 1, "full-support generator");
    check_decomposition(check, stabilize_decompose(x));
  }
}

std::size_t joint_atom_count(const Element& a, const Element& b) {
  std::set<Rational> values;
  for (const Element* e : {&a, &b}) {
    const SpectralDistribution d = distribution(*e);
    for (const auto& atom : d.atoms()) values.insert(atom.value);
  }
  return values.size();
}

bool moments_agree(const Element& a, const Element& b, std::size_t bound) {
  for (unsigned k = 1; k <= bound; ++k) {
    if (moment(a, k) != moment(b, k)) return false;
  }
  return true;
}

bool odd_moments_vanish(const Element& a, std::size_t bound) {
  for (unsigned k = 1; k <= bound; k += 2) {
    if (moment(a, k) != 0) return false;
  }
  return true;
}

// Same distribution on a different space: atoms shuffled and some split in two.
std::vector<Atom> rearranged(testing::Gen& gen, std::vector<Atom> atoms) {
  std::vector<Atom> out;
  for (const auto& a : atoms) {
    if (gen.coin()) {
      out.push_back({a.value, a.mass / 3});
      out.push_back({a.value, 2 * a.mass / 3});
    } else {
      out.push_back(a);
    }
  }
  for (std::size_t i = out.size(); i > 1; --i) std::swap(out[i - 1], out[static_cast<std::size_t>(gen.range(0, static_cast<long>(i) - 1))]);
  return out;
}

std::vector<Atom> perturbed(testing::Gen& gen, std::vector<Atom> atoms) {
  const std::size_t i = static_cast<std::size_t>(gen.range(0, static_cast<long>(atoms.size()) - 1));
  if (atoms.size() > 1 && gen.coin()) {
    const std::size_t j = (i + 1) % atoms.size();
    const Rational moved = std::min(atoms[i].mass, atoms[j].mass) / 2;
    atoms[i].mass -= moved;
    atoms[j].mass += moved;
  } else {
    atoms[i].value += gen.rational(-1, 1, 5, true);
  }
  return atoms;
}

Element place(const CellSpace& space, CellId cell, const std::vector<Atom>& atoms) {
  const Projection p(space, {cell});
  std::vector<Rational> masses;
  for (const auto& a : atoms) masses.push_back(a.mass);
  const Carving c = carve(p, masses);
  std::map<CellId, Affine> coeffs;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (CellId id : c.pieces[i].cells()) coeffs[id] = Affine{atoms[i].value, 0};
  }
  return Element(c.rest.space(), coeffs);
}

void predicates(Checker& check) {
  testing::Gen gen(1008);
  for (int trial = 0; trial < 200; ++trial) {
    const auto atoms = testing::random_atoms(gen, 6, 1);
    const Element a = from_atoms(testing::random_space(gen, static_cast<std::size_t>(gen.range(1, 3))), atoms);
    const auto other = trial % 2 == 0 ? rearranged(gen, atoms) : perturbed(gen, atoms);
    const Element b = from_atoms(testing::random_space(gen, static_cast<std::size_t>(gen.range(1, 3))), other);
    const std::size_t bound = 2 * joint_atom_count(a, b);
    check.expect(equivalent(a, b) == moments_agree(a, b, bound), "equivalence disagrees with moments");
    if (trial % 2 == 0) check.expect(equivalent(a, b), "rearranged copy not equivalent");
  }
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Atom> atoms = testing::random_atoms(gen, 6, Rational(1, 2));
    if (trial % 2 == 0) {
      const std::size_t n = atoms.size();
      for (std::size_t i = 0; i < n; ++i) atoms.push_back({-atoms[i].value, atoms[i].mass});
    }
    const Element x = from_atoms(CellSpace::create(1), atoms);
    const std::size_t bound = 2 * joint_atom_count(x, x);
    check.expect(is_spectrally_symmetric(x) == odd_moments_vanish(x, bound), "symmetry disagrees with odd moments");
    if (trial % 2 == 0) check.expect(is_spectrally_symmetric(x), "mirrored atoms not symmetric");
  }
  const std::pair<CellId, Rational> halves[] = {{0, Rational(1, 2)}, {1, Rational(1, 2)}};
  const CellSpace s = CellSpace::from_cells(1, halves);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a_atoms = testing::random_atoms(gen, 4, Rational(1, 2));
    const auto b_atoms = testing::random_atoms(gen, 4, Rational(1, 2));
    const auto b2_atoms = trial % 2 == 0 ? rearranged(gen, b_atoms) : perturbed(gen, b_atoms);
    // The second pair sits on the opposite halves.
    const Element a1 = place(s, 0, a_atoms);
    const Element b1 = place(a1.space(), 1, b_atoms);
    const Element a2 = place(s, 1, rearranged(gen, a_atoms));
    const Element b2 = place(a2.space(), 0, b2_atoms);
    const Element a1l = lift(a1, b1.space()), a2l = lift(a2, b2.space());
    check.expect(orthogonal(a1l, b1) && orthogonal(a2l, b2), "quadruple not orthogonal");
    check.expect(equivalent(a1l, a2l), "A1 not equivalent to A2");
    check.expect(equivalent(b1, b2) == equivalent(a1l + b1, a2l + b2), "cancellation");
  }
}

void oracle_cross_check(Checker& check) {
  check.expect(!oracle_cases().empty(), "no recorded moments");
  for (std::size_t i = 0; i < oracle_cases().size(); ++i) {
    const OracleCase& c = oracle_cases()[i];
    check.expect(testing::agrees(c.exact, c.estimate()), "quadrature disagrees with exact moment #" + std::to_string(i));
  }
}

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  void (*run)(Checker&);
};

}  // namespace
}  // namespace tracefold

int main() {
  using tracefold::Checker;
  const tracefold::Criterion criteria[] = {
      {1, "mediator moments q(M^k) = 1/(k+1), k <= 20", 0.1, tracefold::mediator_moments},
      {2, "gamma folding closed-form moments, 50 instances, k <= 12", 1.0, tracefold::gamma_identities},
      {3, "moment equals quantile moment, 100 step elements, k <= 10", 2.0, tracefold::moment_quantile},
      {4, "Riemann calculus identities, 100 instances", 2.0, tracefold::riemann_calculus},
      {5, "local folding soundness, 50 instances", 5.0, tracefold::local_folding_soundness},
      {6, "small packing conditions, 50 instances", 5.0, tracefold::small_packing_soundness},
      {7, "three symmetric summands, 100 + 10 stabilized inputs", 10.0, tracefold::three_symmetric_end_to_end},
      {8, "equivalence, symmetry and cancellation predicates", 2.0, tracefold::predicates},
      {9, "floating-point oracle cross-check at 1e-9", 5.0, tracefold::oracle_cross_check},
  };
  bool all = true;
  for (const auto& c : criteria) {
    Checker check;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = check.ok() && elapsed < c.limit_seconds;
    all = all && pass;
    std::printf("%s %d  %s  [%zu checks, %.3f s, limit %.1f s]", pass ? "PASS" : "FAIL", c.id, c.title,
                check.checks(), elapsed, c.limit_seconds);
    if (!check.ok()) std::printf("  first failure: %s", check.failure().c_str());
    std::printf("\n");
  }
  return all ? 0 : 1;
}
