#include <doctest.h>

#include <random>

#include "linf/realroots.hpp"
#include "linf/subres.hpp"
#include "test_util.hpp"

using namespace linf;
using linf::testing::P;

namespace {

const RingPtr XY = make_ring({"x", "y"});
const RingPtr R = make_ring({"r", "w0", "xi", "omega", "gamma"});

const char* kCurveN =
    "(gamma^2 - r^4)*omega^4 + 2*r^2*w0^2*(2*xi^2-1)*(gamma^2 - r^2)*omega^2"
    " + r^4*w0^4*(gamma^2 - 1)";

SparsePoly resultant_oracle(const SparsePoly& p, const SparsePoly& q, std::string_view v) {
  RingPtr ring = unify_rings(p.ring(), q.ring());
  // Classical Res(q, p) matches the library convention.
  return linf::testing::sylvester_resultant(q, p, ring->require(v), ring);
}

}  // namespace

TEST_CASE("small resultants against the Sylvester oracle") {
  auto p = P("x^2 - 2", XY);
  auto q = P("x^2 - x", XY);
  CHECK(resultant(p, q, "x") == resultant_oracle(p, q, "x"));
  CHECK(resultant(p, q, "x") == SparsePoly(XY, 2));

  auto ring = make_ring({"a", "b", "omega"});
  auto f = parse_polynomial("a*omega^2 + b", ring);
  auto g = parse_polynomial("2*a*omega", ring);
  CHECK(resultant(f, g, "omega") == resultant_oracle(f, g, "omega"));
  CHECK(is_associate(resultant(f, g, "omega"), parse_polynomial("a^2*b", ring)));
  CHECK(resultant(f, g, "omega") == parse_polynomial("4*a^2*b", ring));

  auto lin = make_ring({"x", "a", "b"});
  CHECK(resultant(parse_polynomial("x - a", lin), parse_polynomial("x - b", lin), "x") ==
        parse_polynomial("b - a", lin));
  CHECK_THROWS_AS(resultant(SparsePoly(XY), p, "x"), Error);
}

TEST_CASE("closed-form critical resultant") {
  auto n = P(kCurveN, R);
  auto res = resultant(n, derivative(n, "omega"), "omega");
  std::string mu = "(4*xi^2*(xi-1)*(xi+1))";
  std::string m = mu + "*gamma^4 + ((r^2-1)^2 - 2*" + mu + "*r^2)*gamma^2 + " + mu + "*r^4";
  auto expected = P("256*w0^12*r^12*(gamma^2-1)*(gamma^2-r^4)^2*(" + m + ")^2", R);
  CHECK(is_associate(res, expected));
}

TEST_CASE("resultants from the closed-form derivation") {
  auto f1 = P("(r^2+1)*omega^2 + 2*r^2*w0^2*(2*xi^2-1)", R);
  auto f2 = P("(r^2+1)*omega^2 + r^2*w0^2*(2*xi^2-1)", R);
  auto res = resultant(f1, f2, "omega");
  // Direct expansion of the resultant.
  CHECK(is_associate(res, P("r^4*w0^4*(r^2+1)^2*(2*xi^2-1)^2", R)));
  CHECK(resultant_oracle(f1, f2, "omega") == res);

  auto n = P(kCurveN, R);
  auto big_f = resultant(n, derivative(n, "omega"), "gamma");
  auto f1_curve = P("(2*xi^2-1)*omega^4 + w0^2*(r^2+1)*omega^2 + r^2*w0^4*(2*xi^2-1)", R);
  auto quotient = divide_exact(big_f, P("omega^2", R) * f1_curve * f1_curve);
  REQUIRE(quotient.has_value());
  CHECK_FALSE(quotient->depends_on("omega"));
}

TEST_CASE("random bivariate resultants agree with the Sylvester oracle") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> deg(0, 4);
  for (int trial = 0; trial < 40; ++trial) {
    auto p = linf::testing::random_poly(rng, XY, deg(rng) + 1, 5, 16);
    auto q = linf::testing::random_poly(rng, XY, deg(rng) + 1, 5, 16);
    if (p.degree("x") < 1 || q.degree("x") < 0 || q.is_zero()) continue;
    CAPTURE(p.to_string());
    CAPTURE(q.to_string());
    CHECK(resultant(p, q, "x") == resultant_oracle(p, q, "x"));
  }
}

TEST_CASE("common roots annihilate the resultant") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = linf::testing::random_poly(rng, XY, 3, 4);
    auto q = linf::testing::random_poly(rng, XY, 3, 4);
    if (p.is_zero() || q.is_zero()) continue;
    std::uniform_int_distribution<int> c(-20, 20);
    auto lin = P("x", XY) - SparsePoly(XY, Rational(c(rng), 7));
    CHECK(resultant(lin * p, lin * q, "x").is_zero());
  }
}

TEST_CASE("specialization commutes with the resultant") {
  auto ring = make_ring({"omega", "gamma"});
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = linf::testing::random_poly(rng, ring, 4, 6);
    auto q = derivative(p, "omega");
    if (p.degree("omega") < 2) continue;
    Rational g(std::uniform_int_distribution<int>(-30, 30)(rng), 7);
    auto lc = leading_coefficient(p, "omega");
    if (substitute(lc, "gamma", g).is_zero()) continue;
    auto lcq = leading_coefficient(q, "omega");
    if (substitute(lcq, "gamma", g).is_zero()) continue;
    auto lhs = substitute(resultant(p, q, "omega"), "gamma", g);
    auto rhs = resultant(substitute(p, "gamma", g), substitute(q, "gamma", g), "omega");
    CHECK(lhs == rhs);
  }
}

TEST_CASE("defective sequences") {
  auto ring = make_ring({"x"});
  auto p = parse_polynomial("x^6 + x^4 - 3*x^2 + 1", ring);
  auto q = parse_polynomial("x^4 + 2", ring);
  auto seq = subresultant_prs(p, q, "x");
  CHECK(seq.entries.size() == 5);
  CHECK(seq.entry(0) == linf::testing::sylvester_resultant(p, q, 0, ring));
  for (int j = 0; j <= 3; ++j) {
    // Each S_j has degree <= j.
    CHECK(seq.entry(j).degree("x") <= j);
  }
}

TEST_CASE("Sturm-Habicht counts") {
  auto ring = make_ring({"x"});
  CHECK(count_real_roots(parse_polynomial("x^2 + 1", ring)) == 0);
  CHECK(count_real_roots(parse_polynomial("x^2 - 1", ring)) == 2);
  CHECK(count_real_roots(parse_polynomial("x^3 - x", ring)) == 3);
  CHECK(count_real_roots(parse_polynomial("(x-1)^2*(x+3)", ring)) == 2);
  CHECK(count_real_roots(parse_polynomial("7", ring)) == 0);
  CHECK(permanences_minus_variations({1, 2, -4}) == 0);
  CHECK(permanences_minus_variations({1, 2, 4}) == 2);
}

TEST_CASE("counting at a specialization point") {
  auto ring = make_ring({"omega", "gamma"});
  auto p = parse_polynomial("gamma^2*(1+omega^2) - 1", ring);
  auto seq = sturm_habicht(p, "omega");
  CHECK(count_real_roots_at(seq, {{"gamma", Rational(1)}}) == 1);
  CHECK(count_real_roots_at(seq, {{"gamma", Rational(1, 2)}}) == 2);
  CHECK(count_real_roots_at(seq, {{"gamma", Rational(2)}}) == 0);
  // Leading coefficient vanishes at gamma = 0: fallback path.
  CHECK(count_real_roots_at(seq, {{"gamma", Rational(0)}}) == 0);
  CHECK_THROWS_AS(count_real_roots_at(seq, {}), Error);

  auto g = make_ring({"gamma"});
  auto sqrt2 = isolate(parse_polynomial("gamma^2 - 2", g))[1];
  CHECK(count_real_roots_at(seq, {{"gamma", sqrt2}}) == 0);
  auto inv = isolate(parse_polynomial("2*gamma^2 - 1", g))[1];
  CHECK(count_real_roots_at(seq, {{"gamma", inv}}) == 2);
  // gamma^2 - 1/2 at the algebraic point and truncation of a vanishing top coefficient.
  auto q = parse_polynomial("(2*gamma^2 - 1)*omega^3 + omega^2 - 1", ring);
  CHECK(count_real_roots_at(sturm_habicht(q, "omega"), {{"gamma", inv}}) == 2);
}

TEST_CASE("Sturm-Habicht counts agree with isolation on random polynomials") {
  auto ring = make_ring({"x"});
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> deg(1, 12);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = linf::testing::random_univariate(rng, ring, deg(rng), 12);
    CAPTURE(p.to_string());
    CHECK(count_real_roots(p) == int(isolate(p).size()));
  }
}
