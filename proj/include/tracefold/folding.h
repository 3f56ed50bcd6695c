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

#ifndef TRACEFOLD_FOLDING_H_
#define TRACEFOLD_FOLDING_H_

#include <span>
#include <vector>

#include "tracefold/element.h"
#include "tracefold/rational.h"
#include "tracefold/scales.h"

namespace tracefold {

/// A k-folding (A_1..A_k; B_1..B_k) of sum(A) as sum(B). Construction does
/// not validate; use validate_folding.
class Folding {
 public:
  Folding(std::vector<Element> first, std::vector<Element> second);
  /// The k-folding whose members are all zero.
  static Folding zero(const CellSpace& space, std::size_t k = 2);

  std::size_t k() const { return first_.size(); }
  const CellSpace& space() const { return first_.front().space(); }
  const std::vector<Element>& first() const { return first_; }
  const std::vector<Element>& second() const { return second_; }

  Element first_sum() const;
  Element second_sum() const;
  /// Join of all member supports.
  Projection support() const;
  /// Largest member sup-norm.
  Rational norm() const;
  /// (-A_1..-A_k; -B_1..-B_k), a folding of -X as -Y.
  Folding negated() const;

 private:
  std::vector<Element> first_;
  std::vector<Element> second_;
};

Folding lift(const Folding& f, const CellSpace& target);

/// Checks every member shares one space, A_i is orthogonal to every B_j and
/// A_i is equivalent to B_i.
Report validate_folding(const Folding& f);

/// Componentwise sum of foldings with pairwise orthogonal supports, on the
/// finest of their spaces.
Folding folding_sum(std::span<const Folding> foldings);

/// Four pairwise orthogonal projections with D(p1) = D(p3), D(p2) = D(p4).
struct Superprojection {
  Projection p1;
  Projection p2;
  Projection p3;
  Projection p4;
};

Report validate_superprojection(const Superprojection& pi);

/// The element with coordinate value u on every cell of P.
Element mediator(const Projection& p);

/// (A, B; V, W) with A + B = alpha * p1 and V + W = beta * p2. Requires
/// alpha * D(p1) == beta * D(p2) and all four projections nonzero.
Folding gamma_folding(const Superprojection& pi, const Rational& alpha, const Rational& beta);

struct LocalFolding {
  Folding folding;
  /// Ascending step values of X.
  std::vector<Rational> values;
  /// Per step: the level set of X, its mirror slice, and its slices of Q and Q'.
  std::vector<Superprojection> pieces;
  Projection support_mirror;
  Projection q_mirror;
};

/// A 2-folding of a positive step element X as beta * Q with support under
/// P. Requires X supported under P, Q <= P, X orthogonal to Q,
/// q(X) == beta * D(Q) and D(P) >= 2 (D(s(X)) + D(Q)).
LocalFolding local_folding(const Element& x, const Projection& q, const Rational& beta, const Projection& p);

struct SmallPacking {
  Element a1;
  Element a2;
  Element b1;
  Element b2;
  Element y;
  std::size_t n = 0;
  Rational alpha;
  /// Block integrals V_1..V_2n and W_1..W_2n.
  std::vector<Element> v;
  std::vector<Element> w;
};

/// Packs a step element X orthogonal to P into blocks so that
/// X = A1 + A2 - B1 - B2 + Y with Y supported under Q. Requires Q <= P
/// nonzero.
SmallPacking small_packing(const Element& x, const Projection& p, const Projection& q);

/// Checks the seven packing conditions against X, P and Q (lifted to the
/// packing's space).
Report validate_small_packing(const SmallPacking& sp, const Element& x, const Projection& p, const Projection& q);

}  // namespace tracefold

#endif  // TRACEFOLD_FOLDING_H_
