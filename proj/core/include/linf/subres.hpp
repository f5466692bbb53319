#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "linf/exact_poly.hpp"
#include "linf/realroots.hpp"

namespace linf {

/// Subresultants S_j(P, Q) for j = deg Q down to 0, in the classical
/// determinant convention (S_0 is the Sylvester resultant of P and Q).
struct SubresultantSequence {
  std::string main_var;
  int p_degree = 0;
  int q_degree = 0;
  /// entries[k] is S_j with j = q_degree - k (decreasing index).
  std::vector<SparsePoly> entries;
  /// principal_coeffs[k] is the coefficient of main_var^j in entries[k].
  std::vector<SparsePoly> principal_coeffs;

  const SparsePoly& entry(int j) const { return entries.at(q_degree - j); }
  const SparsePoly& principal(int j) const { return principal_coeffs.at(q_degree - j); }
};

SubresultantSequence subresultant_prs(const SparsePoly& p, const SparsePoly& q, std::string_view v);

/// Eliminates v. Sign convention: resultant(x - a, x - b, x) = b - a.
SparsePoly resultant(const SparsePoly& p, const SparsePoly& q, std::string_view v);

/// Discriminant-like polynomial resultant(p, dp/dv, v) (no leading-coefficient division).
SparsePoly derivative_resultant(const SparsePoly& p, std::string_view v);

/// Sturm-Habicht sequence of P: StHa_p = P, StHa_{p-1} = P', then the
/// sign-adjusted subresultants of (P, P').
struct SturmHabichtSequence {
  std::string main_var;
  int degree = 0;
  SparsePoly p;
  /// polys[k] is StHa_j with j = degree - k.
  std::vector<SparsePoly> polys;
  /// principal[k]: coefficient of main_var^j in polys[k].
  std::vector<SparsePoly> principal;
};

SturmHabichtSequence sturm_habicht(const SparsePoly& p, std::string_view v);

/// Signed count of permanences minus variations (generalized rule, zeros allowed
/// anywhere except at the head of the list).
int permanences_minus_variations(const std::vector<int>& signs);

using PointValue = std::variant<Rational, AlgebraicNumber>;
using Point = std::map<std::string, PointValue>;

/// Number of distinct real roots in main_var of P specialized at `point`.
/// The point must fix every other variable of P; at most one coordinate may
/// be irrational.
int count_real_roots_at(const SturmHabichtSequence& seq, const Point& point);

/// Same count for a univariate polynomial, straight from its Sturm-Habicht sequence.
int count_real_roots(const SparsePoly& p);

}  // namespace linf
