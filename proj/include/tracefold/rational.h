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

#ifndef TRACEFOLD_RATIONAL_H_
#define TRACEFOLD_RATIONAL_H_

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tracefold {

/// Arbitrary precision rational. Every mass, coordinate and value in the
/// engine is one of these; nothing in the core touches floating point.
using Rational = mpq_class;

/// Parses "p/q" or "p" (optional leading '-'), rejecting zero denominators
/// and anything that is not plain decimal digits. Result is canonical.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when the denominator is 1).
std::string to_string(const Rational& value);

Rational pow(const Rational& base, unsigned exponent);

/// Smallest integer >= value.
mpz_class ceil(const Rational& value);

/// num/den in canonical form.
inline Rational ratio(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

inline int sign(const Rational& value) { return sgn(value); }

/// Violated operation precondition (bad argument values, mismatched spaces,
/// hypotheses of a construction that do not hold).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Failure list produced by the validators. Empty means every check passed.
struct Report {
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  void add(std::string failure) { failures.push_back(std::move(failure)); }
  void merge(const Report& other, const std::string& prefix);
};

}  // namespace tracefold

#endif  // TRACEFOLD_RATIONAL_H_
