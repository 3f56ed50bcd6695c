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

#include <gtest/gtest.h>

#include <algorithm>

#include "support/generators.h"
#include "tracefold/spectra.h"

namespace tracefold {
namespace {

Rational Q(const char* s) { return parse_rational(s); }

Element atoms_on_unit(std::vector<Atom> atoms) { return from_atoms(CellSpace::create(1), atoms); }

bool mentions(const Report& r, const std::string& text) {
  return std::any_of(r.failures.begin(), r.failures.end(),
                     [&](const std::string& f) { return f.find(text) != std::string::npos; });
}

std::string first_failure(const Report& r) { return r.ok() ? "" : r.failures.front(); }

// Odd moments computed cell by cell, a path independent of the canonical
// distributions used by the verifier.
void expect_odd_moments_vanish(const Element& e, unsigned up_to) {
  for (unsigned k = 1; k <= up_to; k += 2) EXPECT_EQ(moment(e, k), 0) << "order " << k;
}

void expect_sound(const Decomposition& d) {
  EXPECT_TRUE(d.report.ok()) << first_failure(d.report);
  EXPECT_TRUE(verify_decomposition(d).ok());
  EXPECT_TRUE(check_trail(d).ok());
  EXPECT_TRUE(d.x1.space().same_as(d.x2.space()));
  EXPECT_TRUE(d.x1.space().same_as(d.x3.space()));
  EXPECT_EQ(d.x1 + d.x2 + d.x3, d.input);
  for (const Element* e : {&d.x1, &d.x2, &d.x3}) {
    EXPECT_TRUE(is_spectrally_symmetric(*e));
    EXPECT_EQ(quasitrace(*e), 0);
    expect_odd_moments_vanish(*e, 9);
  }
}

TEST(FoldAsSymmetricTest, ZeroInput) {
  const SymmetricFolding f = fold_as_symmetric(Element(CellSpace::create(1)));
  EXPECT_TRUE(f.s.is_zero());
  EXPECT_TRUE(f.folding.support().is_zero());
}

TEST(FoldAsSymmetricTest, Example) {
  const Element x = atoms_on_unit({{1, Q("1/8")}, {-1, Q("1/8")}});
  const SymmetricFolding f = fold_as_symmetric(x);
  // delta = (1 - 2/8 - 2/8) / 4 and beta = q(X+) / delta.
  EXPECT_EQ(f.delta, Q("1/8"));
  EXPECT_EQ(f.beta, 1);
  EXPECT_EQ(distribution(f.s), SpectralDistribution({{-1, Q("1/8")}, {0, Q("3/4")}, {1, Q("1/8")}}, {}));
  EXPECT_TRUE(is_spectrally_symmetric(f.s));
  EXPECT_TRUE(validate_folding(f.folding).ok());
  EXPECT_EQ(f.folding.first_sum(), lift(x, f.folding.space()));
  EXPECT_EQ(f.folding.second_sum(), f.s);
}

TEST(FoldAsSymmetricTest, RejectsBadInput) {
  EXPECT_THROW(fold_as_symmetric(atoms_on_unit({{1, Q("1/8")}})), PreconditionError);
  EXPECT_THROW(fold_as_symmetric(atoms_on_unit({{1, Q("1/4")}, {-1, Q("1/4")}})), PreconditionError);
  const CellSpace space = CellSpace::create(1);
  const Element mediator(space, {{space.cells()[0]->id, Affine{-1, 2}}});
  EXPECT_THROW(fold_as_symmetric(mediator), PreconditionError);
}

TEST(FoldAsSymmetricTest, StaysUnderTheGivenUnit) {
  testing::Gen gen(71);
  for (int trial = 0; trial < 20; ++trial) {
    const Element x0 = atoms_on_unit(testing::random_trace_zero_atoms(gen, 6, ratio(gen.range(1, 15), 64)));
    const Rational room[] = {ratio(gen.range(1, 8), 16)};
    const Carving c = carve(support(x0).complement(), room);
    const Projection unit = lift(support(x0), c.rest.space()).join(c.rest);
    const Element x = lift(x0, c.rest.space());
    const SymmetricFolding f = fold_as_symmetric(x, unit);
    EXPECT_TRUE(validate_folding(f.folding).ok());
    EXPECT_TRUE(f.folding.support().leq(lift(unit, f.folding.space())));
    EXPECT_EQ(f.folding.first_sum(), lift(x, f.folding.space()));
    EXPECT_EQ(f.folding.second_sum(), f.s);
    EXPECT_TRUE(is_spectrally_symmetric(f.s));
  }
}

TEST(ThreeSymmetricTest, ZeroInput) {
  const Decomposition d = three_symmetric(Element(CellSpace::create(1)));
  EXPECT_TRUE(d.x1.is_zero());
  EXPECT_TRUE(d.x2.is_zero());
  EXPECT_TRUE(d.x3.is_zero());
  EXPECT_TRUE(d.report.ok());
}

TEST(ThreeSymmetricTest, Examples) {
  for (const auto& atoms : {std::vector<Atom>{{1, Q("1/4")}, {-1, Q("1/4")}},
                            std::vector<Atom>{{3, Q("1/8")}, {-1, Q("3/8")}}}) {
    const Element x = atoms_on_unit(atoms);
    const Decomposition d = three_symmetric(x);
    expect_sound(d);
    EXPECT_EQ(d.input, lift(x, d.input.space()));
    EXPECT_FALSE(d.stabilized);
    ASSERT_EQ(d.trail.size(), 10u);
    EXPECT_EQ(d.trail.front().origin, "small packing");
    EXPECT_EQ(d.trail.back().name, "S");
    EXPECT_EQ(d.trail.back().origin, "symmetric folding");
  }
}

TEST(ThreeSymmetricTest, RejectsBadInput) {
  try {
    three_symmetric(atoms_on_unit({{1, Q("1/2")}, {-1, Q("1/2")}}));
    FAIL() << "full support accepted";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("stabilize_decompose"), std::string::npos);
  }
  EXPECT_THROW(three_symmetric(atoms_on_unit({{1, Q("1/2")}})), PreconditionError);
}

TEST(ThreeSymmetricTest, RandomEndToEnd) {
  testing::Gen gen(72);
  for (int trial = 0; trial < 25; ++trial) {
    const Rational s = ratio(gen.range(1, 63), 64);
    const Element x = from_atoms(testing::random_space(gen, static_cast<std::size_t>(gen.range(1, 3))),
                                 testing::random_trace_zero_atoms(gen, 8, s));
    expect_sound(three_symmetric(x));
  }
}

TEST(EmbedCornerTest, HalvesTheDistribution) {
  const Element x = atoms_on_unit({{2, Q("1/3")}, {-1, Q("2/3")}});
  const Element e = embed_corner(x);
  EXPECT_EQ(e.space().total_mass(), 1);
  EXPECT_EQ(e.space().size(), x.space().size() + 1);
  EXPECT_EQ(distribution(e), SpectralDistribution({{-1, Q("1/3")}, {0, Q("1/2")}, {2, Q("1/6")}}, {}));
  EXPECT_EQ(quasitrace(e), quasitrace(x) / 2);
  EXPECT_EQ(support(e).dimension(), Q("1/2"));
}

TEST(StabilizeTest, Examples) {
  const Element x = atoms_on_unit({{1, Q("1/2")}, {-1, Q("1/2")}});
  const Decomposition d = stabilize_decompose(x);
  EXPECT_TRUE(d.stabilized);
  expect_sound(d);
  EXPECT_EQ(support(d.input).dimension(), Q("1/2"));
  EXPECT_EQ(quasitrace(d.input), 0);

  const Element zero(CellSpace::create(1));
  const Decomposition dz = stabilize_decompose(zero);
  EXPECT_TRUE(dz.x1.is_zero() && dz.x2.is_zero() && dz.x3.is_zero());
  EXPECT_EQ(dz.x1.space().size(), 2u);
  EXPECT_THROW(stabilize_decompose(atoms_on_unit({{1, 1}})), PreconditionError);
}

TEST(StabilizeTest, RandomFullSupport) {
  testing::Gen gen(73);
  for (int trial = 0; trial < 8; ++trial) {
    const Element x = atoms_on_unit(testing::random_trace_zero_atoms(gen, 6, 1));
    ASSERT_EQ(support(x).dimension(), 1);
    expect_sound(stabilize_decompose(x));
  }
}

TEST(VerifyTest, PerturbAndSwap) {
  const Element x = atoms_on_unit({{1, Q("1/4")}, {-1, Q("1/4")}});
  const Decomposition d = three_symmetric(x);
  EXPECT_TRUE(verify_decomposition(x, d.x2, d.x1, d.x3).ok());
  EXPECT_TRUE(verify_decomposition(x, d.x3, d.x2, d.x1).ok());

  const Rational tiny[] = {Q("1/64")};
  const Carving c = carve(Projection::unit(d.x2.space()), tiny);
  const CellSpace& s = c.rest.space();
  const Element bumped = lift(d.x2, s) + c.pieces[0].element();
  const Report r = verify_decomposition(x, lift(d.x1, s), bumped, lift(d.x3, s));
  EXPECT_TRUE(mentions(r, "X1 + X2 + X3 != X"));
  EXPECT_TRUE(mentions(r, "X2 is not spectrally symmetric"));
  EXPECT_TRUE(mentions(r, "odd moment"));
  EXPECT_FALSE(mentions(r, "X1 is not"));

  const Report mixed = verify_decomposition(x, d.x1, lift(d.x2, s), d.x3);
  EXPECT_TRUE(mentions(mixed, "one space"));
}

TEST(VerifyTest, TrailDetectsTampering) {
  // Inputs with two levels of equal support can leave Y = 0; this one does not.
  Decomposition d = three_symmetric(atoms_on_unit({{1, Q("1/8")}, {2, Q("1/8")}, {-3, Q("1/8")}}));
  ASSERT_FALSE(std::find_if(d.trail.begin(), d.trail.end(), [](const TrailEntry& e) {
                 return e.name == "Y";
               })->value.is_zero());
  for (auto& entry : d.trail) {
    if (entry.name == "Y") entry.value = 2 * entry.value;
  }
  const Report r = check_trail(d);
  EXPECT_TRUE(mentions(r, "X != A1 + A2 - B1 - B2 + Y"));
  EXPECT_TRUE(mentions(r, "Y != (Y1 - S1) + (Y2 - S2) + S"));
}

TEST(CellBudgetTest, GrowsWithInputAndPacking) {
  EXPECT_LT(cell_budget(1, 1), cell_budget(2, 1));
  EXPECT_LT(cell_budget(1, 1), cell_budget(1, 2));
  testing::Gen gen(74);
  for (int trial = 0; trial < 10; ++trial) {
    const Element x = atoms_on_unit(testing::random_trace_zero_atoms(gen, 16, ratio(gen.range(32, 63), 64)));
    const Decomposition d = three_symmetric(x);
    const Rational p = 1 - support(x).dimension();
    const std::size_t n =
        std::max<std::size_t>(1, ceil(Rational(support(x).dimension() / (2 * (p / 4)))).get_ui());
    EXPECT_LE(d.x1.space().size(), cell_budget(x.space().size(), n));
  }
}

}  // namespace
}  // namespace tracefold
