#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "linf/exact_poly.hpp"

namespace linf {

/// num / den, reduced so that gcd(num, den) is constant and den has a
/// lex-leading coefficient of 1.
struct ParsedRational {
  SparsePoly num;
  SparsePoly den;
};

ParsedRational make_reduced(SparsePoly num, SparsePoly den);

/// Identifiers of an expression in order of first appearance.
std::vector<std::string> collect_identifiers(std::string_view text);

/// Parses a rational expression over `+ - * / ^ ( )` with integer and decimal
/// literals. Every identifier must belong to `ring`.
ParsedRational parse_rational_expression(std::string_view text, const RingPtr& ring);

/// Parses either a scalar expression or a bracketed matrix "[[a, b], [c, d]]".
std::vector<std::vector<ParsedRational>> parse_rational_matrix(std::string_view text,
                                                               const RingPtr& ring);

}  // namespace linf
