#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "linf/error.hpp"

namespace linf {

using Integer = mpz_class;
using Rational = mpq_class;

/// Upper bound on the number of variables a single ring may hold.
inline constexpr std::size_t kMaxVars = 8;

using Exponent = std::uint16_t;
using Monomial = std::array<Exponent, kMaxVars>;

/// Ordered list of variable names. Position in the list is the variable's
/// order; index 0 is the most significant variable of the lex term order.
class Ring {
 public:
  explicit Ring(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::size_t require(std::string_view name) const;

  bool operator==(const Ring& other) const noexcept { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
};

using RingPtr = std::shared_ptr<const Ring>;

RingPtr make_ring(std::vector<std::string> names);

/// Smallest ring containing both variable lists with their relative order
/// preserved. Throws ring_mismatch when the two orders disagree.
RingPtr unify_rings(const RingPtr& a, const RingPtr& b);

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept sorted by decreasing lex order of exponent vectors and no
/// stored coefficient is zero, so equal polynomials over the same ring have
/// identical term lists. Values are immutable once built.
class SparsePoly {
 public:
  using Term = std::pair<Monomial, Rational>;

  SparsePoly();
  explicit SparsePoly(RingPtr ring);
  SparsePoly(RingPtr ring, const Rational& constant);
  SparsePoly(RingPtr ring, long constant) : SparsePoly(std::move(ring), Rational(constant)) {}

  static SparsePoly variable(RingPtr ring, std::string_view name);
  static SparsePoly monomial(RingPtr ring, const Monomial& m, const Rational& c);
  /// Builds a polynomial from arbitrary (unsorted, possibly repeated) terms.
  static SparsePoly from_terms(RingPtr ring, std::vector<Term> terms);

  const RingPtr& ring() const noexcept { return ring_; }
  std::span<const Term> terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  /// Value of a constant polynomial; throws if the polynomial is not constant.
  Rational constant_value() const;

  /// Degree in one variable, -1 for the zero polynomial.
  int degree(std::string_view var) const;
  int degree(std::size_t var_index) const;
  int total_degree() const;
  bool depends_on(std::size_t var_index) const;
  bool depends_on(std::string_view var) const;
  std::vector<std::size_t> used_variables() const;
  std::size_t variable_count() const { return used_variables().size(); }

  /// Coefficient of the lex-leading term.
  const Rational& leading_term_coefficient() const;
  const Monomial& leading_monomial() const;
  int sign_of_leading_term() const;

  SparsePoly operator-() const;
  SparsePoly& operator+=(const SparsePoly& other);
  SparsePoly& operator-=(const SparsePoly& other);
  SparsePoly& operator*=(const SparsePoly& other);
  SparsePoly scaled(const Rational& factor) const;

  /// Same polynomial expressed over a ring containing every used variable.
  SparsePoly embed(const RingPtr& target) const;

  std::string to_string() const;

  friend bool operator==(const SparsePoly& a, const SparsePoly& b);

 private:
  SparsePoly(RingPtr ring, std::vector<Term> sorted_terms, bool);

  RingPtr ring_;
  std::vector<Term> terms_;

  friend SparsePoly add_sub(const SparsePoly&, const SparsePoly&, bool);
  friend SparsePoly multiply(const SparsePoly&, const SparsePoly&);
};

SparsePoly operator+(const SparsePoly& a, const SparsePoly& b);
SparsePoly operator-(const SparsePoly& a, const SparsePoly& b);
SparsePoly operator*(const SparsePoly& a, const SparsePoly& b);
SparsePoly operator*(const SparsePoly& a, const Rational& c);
SparsePoly operator*(const Rational& c, const SparsePoly& a);
inline bool operator!=(const SparsePoly& a, const SparsePoly& b) { return !(a == b); }

enum class ArithKind { add, sub, mul };
SparsePoly arith(const SparsePoly& p, const SparsePoly& q, ArithKind kind);

SparsePoly pow(const SparsePoly& p, unsigned exponent);

SparsePoly derivative(const SparsePoly& p, std::string_view var);

/// Exact composition p(var := q).
SparsePoly substitute(const SparsePoly& p, std::string_view var, const SparsePoly& q);
SparsePoly substitute(const SparsePoly& p, std::string_view var, const Rational& value);
/// Substitutes several variables by rationals at once.
SparsePoly substitute(const SparsePoly& p, const std::map<std::string, Rational>& values);
/// Replaces var^2 by q. Throws internal error if an odd power of var occurs.
SparsePoly substitute_square(const SparsePoly& p, std::string_view var, const SparsePoly& q);
/// p(-var).
SparsePoly reflect(const SparsePoly& p, std::string_view var);

/// Coefficient polynomial of var^k (free of var).
SparsePoly coefficient(const SparsePoly& p, std::string_view var, int k);
SparsePoly leading_coefficient(const SparsePoly& p, std::string_view var);
/// Dense view: result[k] is the coefficient of var^k, k = 0..deg.
std::vector<SparsePoly> coefficients(const SparsePoly& p, std::size_t var_index);
SparsePoly from_coefficients(const RingPtr& ring, std::size_t var_index,
                             const std::vector<SparsePoly>& coeffs);

/// Positive rational c with p / c having coprime integer coefficients.
Rational integer_content(const SparsePoly& p);
/// p scaled to coprime integer coefficients and positive lex-leading coefficient.
SparsePoly primitive_part(const SparsePoly& p);
/// p scaled so that the lex-leading coefficient is 1.
SparsePoly monic(const SparsePoly& p);

/// q if p = q * d exactly, nullopt otherwise. d must be nonzero.
std::optional<SparsePoly> divide_exact(const SparsePoly& p, const SparsePoly& d);
/// Like divide_exact but throws internal error on a nonzero remainder.
SparsePoly divide_or_throw(const SparsePoly& p, const SparsePoly& d);

/// Normalized gcd: primitive with positive leading coefficient; gcd(0, 0) = 0.
SparsePoly gcd_poly(const SparsePoly& p, const SparsePoly& q);
SparsePoly lcm_poly(const SparsePoly& p, const SparsePoly& q);
/// gcd of the coefficients of p with respect to var (a var-free polynomial).
SparsePoly content_in(const SparsePoly& p, std::string_view var);

/// Product of the distinct irreducible factors of p, normalized.
SparsePoly squarefree_part(const SparsePoly& p, std::string_view primary_var);
SparsePoly squarefree_part(const SparsePoly& p);

struct SquarefreeFactor {
  SparsePoly factor;
  int multiplicity;
};
/// Yun decomposition of the var-primitive part of p: p = content * prod f_i^i.
/// Factors are primitive, pairwise coprime and squarefree; trivial ones omitted.
std::vector<SquarefreeFactor> squarefree_decomposition(const SparsePoly& p, std::string_view var);

/// Splits p into factors by repeatedly extracting contents with respect to
/// each variable, and takes squarefree parts. Constants are dropped.
std::vector<SparsePoly> content_split(const SparsePoly& p);
/// Refines a list into pairwise coprime squarefree nonconstant factors with the
/// same union of zero sets.
std::vector<SparsePoly> coprime_basis(const std::vector<SparsePoly>& polys);

/// True when p = c * q for a nonzero rational c.
bool is_associate(const SparsePoly& p, const SparsePoly& q);

/// Evaluates a polynomial at a full rational point.
Rational evaluate(const SparsePoly& p, const std::map<std::string, Rational>& values);
int sign_at_point(const SparsePoly& p, const std::map<std::string, Rational>& values);

/// Parses the text serialization (or any polynomial expression) into `ring`,
/// or into a fresh ring of the identifiers in order of appearance when null.
SparsePoly parse_polynomial(std::string_view text, RingPtr ring = nullptr);

std::string to_string(const Rational& q);
Rational parse_rational(std::string_view text);

}  // namespace linf
