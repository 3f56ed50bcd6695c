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

#include "tracefold/serialize.h"

#include <gtest/gtest.h>

#include "support/generators.h"

namespace tracefold {
namespace {

Rational Q(const char* s) { return parse_rational(s); }

TEST(RationalJsonTest, RoundTrips) {
  testing::Gen gen(81);
  for (int trial = 0; trial < 200; ++trial) {
    const Rational r = gen.rational(-1000, 1000, 997);
    EXPECT_EQ(rational_from_json(Json::parse(to_json(r).dump())), r);
  }
  EXPECT_EQ(rational_from_json(Json(7)), 7);
  EXPECT_EQ(rational_from_json(Json(-3)), -3);
  EXPECT_EQ(rational_from_json(Json("4/6")), Q("2/3"));
  EXPECT_EQ(to_json(Q("-2/4")), Json("-1/2"));
  EXPECT_THROW(rational_from_json(Json("1/0")), FormatError);
  EXPECT_THROW(rational_from_json(Json(0.5)), FormatError);
  EXPECT_THROW(rational_from_json(Json("one")), FormatError);
}

TEST(ElementJsonTest, RoundTrips) {
  testing::Gen gen(82);
  for (int trial = 0; trial < 30; ++trial) {
    const CellSpace space = testing::random_space(gen, 5);
    std::map<CellId, Affine> coeffs;
    for (const auto& c : space.cells()) {
      if (gen.coin()) coeffs[c->id] = Affine{gen.rational(-9, 9, 7), gen.rational(-9, 9, 7)};
    }
    const Element e(space, coeffs);
    const CellSpace loaded = space_from_json(Json::parse(to_json(space).dump()));
    ASSERT_EQ(loaded.size(), space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
      EXPECT_EQ(loaded.cells()[i]->id, space.cells()[i]->id);
      EXPECT_EQ(loaded.cells()[i]->mass, space.cells()[i]->mass);
    }
    const Element back = element_from_json(Json::parse(to_json(e).dump()), loaded);
    EXPECT_EQ(back.coeffs(), e.coeffs());
  }
}

TEST(ElementJsonTest, RejectsMalformed) {
  const CellSpace space = CellSpace::create(1);
  const CellId id = space.cells()[0]->id;
  EXPECT_THROW(element_from_json(Json::object(), space), FormatError);
  EXPECT_THROW(element_from_json(Json::parse(R"([{"cell": 99, "a": "1"}])"), space), FormatError);
  const Json twice = Json::array({{{"cell", id}, {"a", "1"}}, {{"cell", id}, {"a", "2"}}});
  EXPECT_THROW(element_from_json(twice, space), FormatError);
  const Json no_b = Json::array({{{"cell", id}, {"a", "1/2"}}});
  EXPECT_EQ(element_from_json(no_b, space).at(id), (Affine{Q("1/2"), 0}));
  EXPECT_THROW(space_from_json(Json::parse(R"({"total_mass": "1", "cells": [{"id": 0, "mass": "1/2"}]})")),
               FormatError);
}

TEST(AtomsJsonTest, ParsesAndValidates) {
  const AtomsInput in =
      atoms_from_json(Json::parse(R"({"atoms": [{"value": 1, "mass": "1/4"}, {"value": "-1", "mass": "1/4"}]})"));
  ASSERT_EQ(in.atoms.size(), 2u);
  EXPECT_EQ(in.atoms[1].value, -1);
  EXPECT_FALSE(in.stabilize);
  EXPECT_TRUE(atoms_from_json(Json::parse(R"({"atoms": [], "stabilize": true})")).stabilize);
  EXPECT_THROW(atoms_from_json(Json::parse(R"({"atoms": [{"value": 1, "mass": "0"}]})")), FormatError);
  EXPECT_THROW(atoms_from_json(Json::parse(R"({"atoms": [{"value": 1, "mass": "3/4"}, {"value": 2, "mass": "1/2"}]})")),
               FormatError);
  EXPECT_THROW(atoms_from_json(Json::parse(R"({"atoms": [{"value": 1}]})")), FormatError);
  EXPECT_THROW(atoms_from_json(Json::parse(R"({"atoms": [1, 2]})")), FormatError);
  EXPECT_THROW(atoms_from_json(Json::parse(R"({"atoms": [], "stabilize": "yes"})")), FormatError);
  EXPECT_THROW(atoms_from_json(Json::parse("[]")), FormatError);
}

TEST(DecompositionJsonTest, RoundTripsAndIsDeterministic) {
  const Element x = from_atoms(CellSpace::create(1), std::vector<Atom>{{3, Q("1/8")}, {-1, Q("3/8")}});
  const Decomposition d = three_symmetric(x);
  const std::string text = to_json(d, 7).dump(2);
  EXPECT_EQ(text, to_json(three_symmetric(x), 7).dump(2));

  const Json j = Json::parse(text);
  EXPECT_TRUE(j.at("verified").get<bool>());
  EXPECT_TRUE(j.at("exact_sum").get<bool>());
  ASSERT_EQ(j.at("summands").size(), 3u);
  for (const auto& s : j.at("summands")) {
    EXPECT_TRUE(s.at("symmetric").get<bool>());
    EXPECT_EQ(s.at("odd_moments").size(), 4u);
    for (const auto& m : s.at("odd_moments")) EXPECT_EQ(m.at("moment"), "0");
  }

  const LoadedDecomposition loaded = decomposition_from_json(j);
  EXPECT_TRUE(verify_decomposition(loaded.input, loaded.x1, loaded.x2, loaded.x3).ok());
  EXPECT_EQ(loaded.x2.coeffs(), d.x2.coeffs());

  Json edited = j;
  edited["summands"][1]["cells"][0]["a"] = "12345";
  const LoadedDecomposition bad = decomposition_from_json(edited);
  EXPECT_FALSE(verify_decomposition(bad.input, bad.x1, bad.x2, bad.x3).ok());

  EXPECT_THROW(decomposition_from_json(Json::object()), FormatError);
  Json wrong_count = j;
  wrong_count["summands"].erase(0);
  EXPECT_THROW(decomposition_from_json(wrong_count), FormatError);
}

TEST(OtherJsonTest, Shapes) {
  const Element x = from_atoms(CellSpace::create(1), std::vector<Atom>{{2, Q("1/2")}});
  const Json d = to_json(distribution(x));
  EXPECT_EQ(d.at("atoms").size(), 2u);
  EXPECT_EQ(d.at("atoms")[1].at("value"), "2");
  const Json w = to_json(quantile(x));
  EXPECT_EQ(w.size(), 2u);
  EXPECT_EQ(w[1].at("t_lo"), "1/2");
  const Json f = to_json(StepFunction::from_knots({0, Q("1/2"), 1}, {1, 2}));
  EXPECT_EQ(f.at("pieces").size(), 2u);
  Report r;
  r.add("broken");
  EXPECT_EQ(to_json(r), Json::array({"broken"}));
  const Json zero = to_json(Folding::zero(x.space()));
  EXPECT_EQ(zero.at("k"), 2);
  EXPECT_TRUE(zero.at("failures").empty());
}

}  // namespace
}  // namespace tracefold
