#include <doctest.h>

#include <random>

#include "linf/exact_poly.hpp"
#include "linf/expr.hpp"
#include "test_util.hpp"

using namespace linf;
using linf::testing::P;

namespace {

const RingPtr R = make_ring({"r", "w0", "xi", "omega", "gamma"});

// Curve numerator of the second-order ratio system, used in several checks.
const char* kCurveN =
    "(gamma^2 - r^4)*omega^4 + 2*r^2*w0^2*(2*xi^2-1)*(gamma^2 - r^2)*omega^2"
    " + r^4*w0^4*(gamma^2 - 1)";

}  // namespace

TEST_CASE("arith basics") {
  CHECK(P("omega+1", R) + P("omega-1", R) == P("2*omega", R));
  CHECK(P("gamma-1", R) * P("gamma+1", R) == P("gamma^2-1", R));
  CHECK((P("gamma^3 + omega", R) * SparsePoly(R)).is_zero());
  CHECK(arith(P("omega", R), P("gamma", R), ArithKind::sub) == P("omega - gamma", R));
}

TEST_CASE("polynomials from different rings embed by name") {
  auto a = parse_polynomial("x + y");
  auto b = parse_polynomial("y*z");
  auto c = a * b;
  CHECK(c.ring()->names() == std::vector<std::string>{"x", "y", "z"});
  CHECK(c == parse_polynomial("x*y*z + y^2*z", c.ring()));
  auto bad = parse_polynomial("y + x");
  CHECK_THROWS_AS(bad.embed(make_ring({"x", "y"})) + a * parse_polynomial("y") +
                      (a + bad.embed(make_ring({"y", "x"}))),
                  Error);
}

TEST_CASE("text round trip and serialization format") {
  auto p = P("3/4*r^2*gamma - omega + 1", R);
  CHECK(p.to_string() == "3/4*r^2*gamma - omega + 1");
  CHECK(P(p.to_string(), R) == p);
  CHECK(SparsePoly(R).to_string() == "0");
  CHECK(P("-(gamma)^2/2", R).to_string() == "-1/2*gamma^2");
  CHECK_THROWS_AS(P("gamma +", R), ParseError);
  CHECK_THROWS_AS(P("1/omega", R), Error);
  CHECK(P("0.25*omega", R) == P("omega/4", R));
}

TEST_CASE("derivative") {
  CHECK(derivative(P("gamma^2*omega^2 + omega", R), "omega") == P("2*gamma^2*omega + 1", R));
  CHECK(derivative(P("gamma^2-1", R), "omega").is_zero());
  // Oracle: term-by-term power rule on the expanded form.
  auto n = P(kCurveN, R);
  auto expected = P("4*(gamma^2 - r^4)*omega^3 + 4*r^2*w0^2*(2*xi^2-1)*(gamma^2 - r^2)*omega", R);
  CHECK(derivative(n, "omega") == expected);
}

TEST_CASE("substitution") {
  auto p = P("gamma^2*(1+omega^2) - 1", R);
  CHECK(substitute(p, "omega", Rational(1, 2)) == P("5/4*gamma^2 - 1", R));
  auto ring = make_ring({"s", "omega"});
  auto q = parse_polynomial("s^4 + 2*s^2 + 1", ring);
  CHECK(substitute_square(q, "s", parse_polynomial("-omega^2", ring)) ==
        parse_polynomial("omega^4 - 2*omega^2 + 1", ring));
  CHECK_THROWS_AS(substitute_square(parse_polynomial("s^3", ring), "s", SparsePoly(ring, 1)), Error);
  CHECK(reflect(parse_polynomial("s^3 + s^2 + s + 1", ring), "s") ==
        parse_polynomial("-s^3 + s^2 - s + 1", ring));
  CHECK(substitute(p, "omega", P("gamma", R)) == P("gamma^4 + gamma^2 - 1", R));
}

TEST_CASE("substituting a sample point gives the expected coefficients") {
  auto n = P(kCurveN, R);
  std::map<std::string, Rational> at{{"xi", Rational(Integer("25476206690102465"), Integer(1) << 56)},
                                     {"r", Rational(1, 2)},
                                     {"w0", Rational(1)}};
  auto s = substitute(n, at);
  Rational a(Integer("-1947111321950592219128255965533823"),
             Integer("5192296858534827628530496329220096"));
  Rational b(Integer("1947111321950592219128255965533823"),
             Integer("20769187434139310514121985316880384"));
  auto expected = P("(gamma - 1/4)*(gamma + 1/4)*omega^4", R) +
                  P("gamma^2*omega^2", R).scaled(a) + P("omega^2", R).scaled(b) +
                  P("(gamma - 1)*(gamma + 1)/16", R);
  CHECK(s == expected);
}

TEST_CASE("gcd") {
  CHECK(gcd_poly(P("(omega-1)*(gamma+1)", R), P("(omega-1)*(gamma-3)", R)) == P("omega-1", R));
  auto n = P(kCurveN, R);
  CHECK(gcd_poly(n, n) == primitive_part(n));
  CHECK(gcd_poly(P("2*omega+4", R), SparsePoly(R)) == P("omega+2", R));
  CHECK(gcd_poly(SparsePoly(R), SparsePoly(R)).is_zero());
  // f1, f2 of the closed-form derivation are coprime.
  auto f1 = P("(r^2+1)*omega^2 + 2*r^2*w0^2*(2*xi^2-1)", R);
  auto f2 = P("(r^2+1)*omega^2 + r^2*w0^2*(2*xi^2-1)", R);
  CHECK(gcd_poly(f1, f2).is_constant());
}

TEST_CASE("gcd property on random inputs") {
  std::mt19937_64 rng(1234);
  auto ring = make_ring({"x", "y", "z"});
  for (int trial = 0; trial < 40; ++trial) {
    auto p = linf::testing::random_poly(rng, ring, 3, 4);
    auto q = linf::testing::random_poly(rng, ring, 3, 4);
    auto g = linf::testing::random_poly(rng, ring, 2, 3);
    if (p.is_zero() || q.is_zero() || g.is_zero()) continue;
    auto h = gcd_poly(p * g, q * g);
    auto expected = g * gcd_poly(p, q);
    CAPTURE(p.to_string());
    CAPTURE(q.to_string());
    CAPTURE(g.to_string());
    CHECK(is_associate(h, expected));
    CHECK(divide_exact(p * g, h).has_value());
    CHECK(divide_exact(q * g, h).has_value());
  }
}

TEST_CASE("ring axioms and product rule on random inputs") {
  std::mt19937_64 rng(99);
  auto ring = make_ring({"a", "b", "c"});
  for (int trial = 0; trial < 50; ++trial) {
    auto p = linf::testing::random_poly(rng, ring, 3, 5);
    auto q = linf::testing::random_poly(rng, ring, 3, 5);
    auto r = linf::testing::random_poly(rng, ring, 2, 3);
    CHECK(p * q == q * p);
    CHECK((p * q) * r == p * (q * r));
    CHECK(p * (q + r) == p * q + p * r);
    CHECK((p + q) - q == p);
    CHECK(derivative(p * q, "b") == derivative(p, "b") * q + p * derivative(q, "b"));
    if (!r.is_zero()) {
      auto d = divide_exact(p * r, r);
      REQUIRE(d.has_value());
      CHECK(*d == p);
    }
  }
}

TEST_CASE("canonical form") {
  auto a = pow(P("omega+gamma", R), 3);
  auto b = P("omega^3 + 3*omega^2*gamma + 3*omega*gamma^2 + gamma^3", R);
  auto c = P("(omega+gamma)*(omega+gamma)", R) * P("omega+gamma", R);
  CHECK(a == b);
  CHECK(c == b);
  CHECK(std::vector<SparsePoly::Term>(a.terms().begin(), a.terms().end()) ==
        std::vector<SparsePoly::Term>(b.terms().begin(), b.terms().end()));
}

TEST_CASE("squarefree part") {
  CHECK(squarefree_part(P("(omega^2-1)^2*(gamma-2)", R), "omega") == P("(omega^2-1)*(gamma-2)", R));
  auto sf = P("(omega^2-1)*(gamma-2)", R);
  CHECK(squarefree_part(sf, "omega") == sf);
  CHECK(squarefree_part(P("5*gamma^3", R)) == P("gamma", R));

  // Closed-form resultant at a fixed rational parameter point.
  std::map<std::string, Rational> at{{"r", Rational(1, 2)}, {"w0", Rational(3)}, {"xi", Rational(1, 3)}};
  std::string mu = "(4*xi^2*(xi-1)*(xi+1))";
  std::string m = mu + "*gamma^4 + ((r^2-1)^2 - 2*" + mu + "*r^2)*gamma^2 + " + mu + "*r^4";
  auto big = P("256*w0^12*r^12*(gamma^2-1)*(gamma^2-r^4)^2*(" + m + ")^2", R);
  auto small = P("(gamma^2-1)*(gamma^2-r^4)*(" + m + ")", R);
  auto got = squarefree_part(substitute(big, at), "gamma");
  CHECK(is_associate(got, squarefree_part(substitute(small, at), "gamma")));
  CHECK(is_associate(got, substitute(small, at)));

  std::mt19937_64 rng(7);
  auto ring = make_ring({"x", "y"});
  for (int trial = 0; trial < 30; ++trial) {
    auto a = linf::testing::random_poly(rng, ring, 2, 3, 4);
    auto b = linf::testing::random_poly(rng, ring, 2, 3, 4);
    if (a.is_zero() || b.is_zero() || a.is_constant()) continue;
    auto p = a * a * b;
    auto s = squarefree_part(p, "x");
    for (const char* v : {"x", "y"}) {
      auto g = gcd_poly(s, derivative(s, v));
      CHECK_FALSE(g.depends_on(std::string_view(v)));
    }
    CHECK(divide_exact(p, s).has_value());
    CHECK(divide_exact(s * s, squarefree_part(a)).has_value());
  }
}

TEST_CASE("leading coefficient and degree") {
  auto n = P(kCurveN, R);
  CHECK(leading_coefficient(n, "omega") == P("gamma^2 - r^4", R));
  auto p = P("gamma^2-1", R);
  CHECK(leading_coefficient(p, "omega") == p);
  CHECK(p.degree("omega") == 0);
  CHECK(SparsePoly(R).degree("omega") == -1);
  CHECK(leading_coefficient(P("3*xi*gamma^4 + gamma + 1", R), "gamma") == P("3*xi", R));
}

TEST_CASE("squarefree decomposition and coprime basis") {
  auto ring = make_ring({"x", "y"});
  auto p = parse_polynomial("(x-1)*(x+y)^2*(x^2+1)^3*(y+2)", ring);
  auto parts = squarefree_decomposition(p, "x");
  REQUIRE(parts.size() == 3);
  CHECK(parts[0].multiplicity == 1);
  CHECK(parts[0].factor == parse_polynomial("x-1", ring));
  CHECK(parts[1].factor == parse_polynomial("x+y", ring));
  CHECK(parts[2].factor == parse_polynomial("x^2+1", ring));
  CHECK(parts[2].multiplicity == 3);

  auto basis = coprime_basis({parse_polynomial("(x-1)*(x+1)", ring), parse_polynomial("(x+1)*y^2", ring)});
  CHECK(basis.size() == 3);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) CHECK(gcd_poly(basis[i], basis[j]).is_constant());

  auto split = content_split(parse_polynomial("x*y^2 - y^2", ring));
  CHECK(split.size() == 2);
}

TEST_CASE("rational expressions and matrices") {
  auto ring = make_ring({"a", "s"});
  auto e = parse_rational_expression("(s^2-1)/(s+1) + a/2", ring);
  CHECK(e.den.is_constant());
  auto m = parse_rational_matrix("[[1/(s+1), 0],[0, 2]]", ring);
  REQUIRE(m.size() == 2);
  CHECK(m[0].size() == 2);
  CHECK(m[0][0].den == parse_polynomial("s+1", ring));
  CHECK(m[1][1].num == SparsePoly(ring, 2));
  CHECK_THROWS_AS(parse_rational_matrix("[[1, 2],[3]]", ring), ParseError);
  CHECK_THROWS_AS(parse_rational_expression("1/(s-s)", ring), ParseError);
  CHECK(collect_identifiers("xi*s + w0^2 - xi") == std::vector<std::string>{"xi", "s", "w0"});
}
