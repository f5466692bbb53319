#include <algorithm>
#include <cctype>

#include "linf/expr.hpp"

namespace linf {

ParsedRational make_reduced(SparsePoly num, SparsePoly den) {
  if (den.is_zero()) throw Error(ErrorKind::degenerate, "division by the zero polynomial");
  RingPtr ring = unify_rings(num.ring(), den.ring());
  num = num.embed(ring);
  den = den.embed(ring);
  if (num.is_zero()) return {num, SparsePoly(ring, 1)};
  if (!den.is_constant()) {
    SparsePoly g = gcd_poly(num, den);
    if (!g.is_constant()) {
      num = divide_or_throw(num, g);
      den = divide_or_throw(den, g);
    }
  }
  Rational lc = den.leading_term_coefficient();
  return {num.scaled(Rational(1) / lc), den.scaled(Rational(1) / lc)};
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  Parser(std::string_view text, RingPtr ring) : text_(text), ring_(std::move(ring)) {}

  ParsedRational expression() {
    ParsedRational lhs = term();
    for (;;) {
      skip();
      char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      ParsedRational rhs = term();
      SparsePoly a = lhs.num * rhs.den;
      SparsePoly b = rhs.num * lhs.den;
      lhs = make_reduced(c == '+' ? a + b : a - b, lhs.den * rhs.den);
    }
  }

  ParsedRational term() {
    ParsedRational lhs = unary();
    for (;;) {
      skip();
      char c = peek();
      if (c != '*' && c != '/') return lhs;
      std::size_t at = pos_++;
      ParsedRational rhs = unary();
      if (c == '*') {
        lhs = make_reduced(lhs.num * rhs.num, lhs.den * rhs.den);
      } else {
        if (rhs.num.is_zero()) throw ParseError("division by zero", at);
        lhs = make_reduced(lhs.num * rhs.den, lhs.den * rhs.num);
      }
    }
  }

  ParsedRational unary() {
    skip();
    if (peek() == '-') {
      ++pos_;
      ParsedRational r = unary();
      return {-r.num, r.den};
    }
    if (peek() == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  ParsedRational power() {
    ParsedRational base = primary();
    skip();
    if (peek() != '^') return base;
    ++pos_;
    skip();
    bool negative = false;
    if (peek() == '-') {
      negative = true;
      ++pos_;
      skip();
    }
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) throw ParseError("expected integer exponent", pos_);
    unsigned long e = std::stoul(std::string(text_.substr(start, pos_ - start)));
    if (e > 4096) throw ParseError("exponent too large", start);
    auto ue = static_cast<unsigned>(e);
    if (negative) {
      if (base.num.is_zero()) throw ParseError("zero raised to a negative power", start);
      return make_reduced(pow(base.den, ue), pow(base.num, ue));
    }
    return {pow(base.num, ue), pow(base.den, ue)};
  }

  ParsedRational primary() {
    skip();
    char c = peek();
    if (c == '(') {
      ++pos_;
      ParsedRational r = expression();
      skip();
      expect(')');
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (ident_start(c)) {
      std::size_t start = pos_;
      while (ident_char(peek())) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      if (!ring_->index_of(name)) throw ParseError("unknown identifier '" + name + "'", start);
      return {SparsePoly::variable(ring_, name), SparsePoly(ring_, 1)};
    }
    if (c == '\0') throw ParseError("unexpected end of input", pos_);
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  ParsedRational number() {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    std::string digits(text_.substr(start, pos_ - start));
    Integer scale = 1;
    if (peek() == '.') {
      ++pos_;
      std::size_t frac = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      digits += std::string(text_.substr(frac, pos_ - frac));
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, pos_ - frac);
    }
    if (digits.empty()) throw ParseError("malformed number", start);
    Rational value(Integer(digits, 10), scale);
    value.canonicalize();
    return {SparsePoly(ring_, value), SparsePoly(ring_, 1)};
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void expect(char c) {
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }
  bool at_end() {
    skip();
    return pos_ >= text_.size();
  }
  std::size_t position() const { return pos_; }
  void advance() { ++pos_; }

 private:
  std::string_view text_;
  RingPtr ring_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::string> collect_identifiers(std::string_view text) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size();) {
    if (ident_start(text[i]) && (i == 0 || !ident_char(text[i - 1]))) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string name(text.substr(i, j - i));
      if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(std::move(name));
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(text[i]))) {
      // Skip the full literal so that "2e" style typos do not create names.
      while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) ++i;
    } else {
      ++i;
    }
  }
  return out;
}

ParsedRational parse_rational_expression(std::string_view text, const RingPtr& ring) {
  Parser p(text, ring);
  ParsedRational r = p.expression();
  if (!p.at_end()) throw ParseError("trailing input", p.position());
  return r;
}

std::vector<std::vector<ParsedRational>> parse_rational_matrix(std::string_view text,
                                                               const RingPtr& ring) {
  Parser p(text, ring);
  p.skip();
  if (p.peek() != '[') {
    ParsedRational r = p.expression();
    if (!p.at_end()) throw ParseError("trailing input", p.position());
    return {{std::move(r)}};
  }
  std::vector<std::vector<ParsedRational>> rows;
  p.expect('[');
  for (;;) {
    p.skip();
    p.expect('[');
    std::vector<ParsedRational> row;
    for (;;) {
      row.push_back(p.expression());
      p.skip();
      if (p.peek() == ',') {
        p.advance();
        continue;
      }
      p.expect(']');
      break;
    }
    if (!rows.empty() && rows.front().size() != row.size()) {
      throw ParseError("matrix rows have different lengths", p.position());
    }
    rows.push_back(std::move(row));
    p.skip();
    if (p.peek() == ',') {
      p.advance();
      continue;
    }
    p.expect(']');
    break;
  }
  if (!p.at_end()) throw ParseError("trailing input", p.position());
  return rows;
}

}  // namespace linf
