#pragma once

#include <compare>
#include <string>
#include <vector>

#include "linf/exact_poly.hpp"

namespace linf {

/// [low, high] with exact = (low == high is the root). When not exact the
/// defining polynomial has one root in (low, high) and none at the endpoints.
struct IsolatingInterval {
  Rational low;
  Rational high;
  bool exact = false;

  Rational width() const { return high - low; }
  bool operator==(const IsolatingInterval&) const = default;
};

/// A real root of a squarefree, integer-primitive univariate polynomial,
/// pinned down by an isolating interval.
class AlgebraicNumber {
 public:
  AlgebraicNumber(SparsePoly defining, IsolatingInterval interval);

  static AlgebraicNumber from_rational(const Rational& value, std::string var = "x");

  const SparsePoly& defining() const noexcept { return defining_; }
  const IsolatingInterval& interval() const noexcept { return interval_; }
  bool is_exact() const noexcept { return interval_.exact; }
  /// Midpoint of the interval; the value itself when exact.
  Rational midpoint() const { return (interval_.low + interval_.high) / 2; }
  double to_double() const;

  std::string to_string() const;

 private:
  SparsePoly defining_;
  IsolatingInterval interval_;
};

/// Sign of a univariate (or constant) polynomial at a rational point.
int sign_at(const SparsePoly& f, const Rational& x);

/// Upper bound on the number of roots of f in the open interval (low, high)
/// given by Descartes' rule; exact when it returns 0 or 1.
int descartes_bound(const SparsePoly& f, const Rational& low, const Rational& high);

/// All distinct real roots of a nonzero univariate polynomial, ascending.
std::vector<AlgebraicNumber> isolate(const SparsePoly& f);

/// Same root with interval width at most `width`.
AlgebraicNumber refine(const AlgebraicNumber& a, const Rational& width);

/// Exact sign of q at a. q must be univariate (any variable name) or constant.
int sign_at_algebraic(const SparsePoly& q, const AlgebraicNumber& a);

std::strong_ordering compare(const AlgebraicNumber& a, const AlgebraicNumber& b);
std::strong_ordering compare(const AlgebraicNumber& a, const Rational& b);

/// The rational of smallest denominator in the closed interval [low, high].
Rational simplest_rational_between(const Rational& low, const Rational& high);

}  // namespace linf
