#include "linf/exact_poly.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <sstream>
#include <unordered_map>

#include "linf/expr.hpp"

namespace linf {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::ring_mismatch: return "ring_mismatch";
    case ErrorKind::parse: return "parse";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::not_well_behaved: return "not_well_behaved";
    case ErrorKind::unsupported_dimension: return "unsupported_dimension";
    case ErrorKind::unsupported_constraint: return "unsupported_constraint";
    case ErrorKind::boundary: return "boundary";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

// ---------------------------------------------------------------- Ring

Ring::Ring(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxVars) {
    throw Error(ErrorKind::invalid_argument,
                "ring has " + std::to_string(names_.size()) + " variables, at most " +
                    std::to_string(kMaxVars) + " are supported");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    for (std::size_t j = i + 1; j < names_.size(); ++j) {
      if (names_[i] == names_[j]) {
        throw Error(ErrorKind::ring_mismatch, "duplicate variable '" + names_[i] + "' in ring");
      }
    }
  }
}

std::optional<std::size_t> Ring::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Ring::require(std::string_view name) const {
  auto idx = index_of(name);
  if (!idx) {
    throw Error(ErrorKind::ring_mismatch, "variable '" + std::string(name) + "' is not in the ring");
  }
  return *idx;
}

RingPtr make_ring(std::vector<std::string> names) {
  return std::make_shared<const Ring>(std::move(names));
}

namespace {

const RingPtr& empty_ring() {
  static const RingPtr ring = make_ring({});
  return ring;
}

}  // namespace

RingPtr unify_rings(const RingPtr& a, const RingPtr& b) {
  if (a == b || *a == *b) return a;
  if (a->size() == 0) return b;
  if (b->size() == 0) return a;
  // Common variables must appear in the same relative order.
  std::vector<std::size_t> positions;
  for (const auto& name : b->names()) {
    if (auto idx = a->index_of(name)) positions.push_back(*idx);
  }
  if (!std::is_sorted(positions.begin(), positions.end())) {
    throw Error(ErrorKind::ring_mismatch, "rings order their common variables differently");
  }
  std::vector<std::string> merged = a->names();
  std::ptrdiff_t insert_at = 0;
  for (const auto& name : b->names()) {
    auto it = std::find(merged.begin(), merged.end(), name);
    if (it != merged.end()) {
      insert_at = (it - merged.begin()) + 1;
    } else {
      merged.insert(merged.begin() + insert_at, name);
      ++insert_at;
    }
  }
  return make_ring(std::move(merged));
}

// ---------------------------------------------------------------- helpers

namespace {

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    static_assert(sizeof(Monomial) == 16);
    std::memcpy(&a, m.data(), 8);
    std::memcpy(&b, m.data() + 4, 8);
    std::uint64_t h = a * 0x9E3779B97F4A7C15ULL;
    h ^= (b + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2));
    return static_cast<std::size_t>(h);
  }
};

Monomial add_monomials(const Monomial& a, const Monomial& b) {
  Monomial out{};
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    unsigned s = unsigned(a[i]) + unsigned(b[i]);
    if (s > 0xFFFFu) throw Error(ErrorKind::internal, "exponent overflow");
    out[i] = static_cast<Exponent>(s);
  }
  return out;
}

bool divides(const Monomial& d, const Monomial& m) {
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    if (d[i] > m[i]) return false;
  }
  return true;
}

void sort_and_combine(std::vector<SparsePoly::Term>& terms) {
  std::sort(terms.begin(), terms.end(),
            [](const auto& x, const auto& y) { return x.first > y.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i + 1;
    Rational acc = terms[i].second;
    while (j < terms.size() && terms[j].first == terms[i].first) {
      acc += terms[j].second;
      ++j;
    }
    if (acc != 0) {
      terms[out].first = terms[i].first;
      terms[out].second = std::move(acc);
      ++out;
    }
    i = j;
  }
  terms.resize(out);
}

}  // namespace

// ---------------------------------------------------------------- SparsePoly basics

SparsePoly::SparsePoly() : ring_(empty_ring()) {}

SparsePoly::SparsePoly(RingPtr ring) : ring_(ring ? std::move(ring) : empty_ring()) {}

SparsePoly::SparsePoly(RingPtr ring, const Rational& constant)
    : ring_(ring ? std::move(ring) : empty_ring()) {
  if (constant != 0) terms_.emplace_back(Monomial{}, constant);
}

SparsePoly::SparsePoly(RingPtr ring, std::vector<Term> sorted_terms, bool)
    : ring_(std::move(ring)), terms_(std::move(sorted_terms)) {}

SparsePoly SparsePoly::variable(RingPtr ring, std::string_view name) {
  Monomial m{};
  m[ring->require(name)] = 1;
  return monomial(std::move(ring), m, Rational(1));
}

SparsePoly SparsePoly::monomial(RingPtr ring, const Monomial& m, const Rational& c) {
  std::vector<Term> t;
  if (c != 0) t.emplace_back(m, c);
  return SparsePoly(std::move(ring), std::move(t), true);
}

SparsePoly SparsePoly::from_terms(RingPtr ring, std::vector<Term> terms) {
  sort_and_combine(terms);
  return SparsePoly(std::move(ring), std::move(terms), true);
}

bool SparsePoly::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].first == Monomial{});
}

Rational SparsePoly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_constant()) throw Error(ErrorKind::internal, "polynomial is not constant: " + to_string());
  return terms_[0].second;
}

int SparsePoly::degree(std::string_view var) const {
  auto idx = ring_->index_of(var);
  if (!idx) return terms_.empty() ? -1 : 0;
  return degree(*idx);
}

int SparsePoly::degree(std::size_t var_index) const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, int(m[var_index]));
  return d;
}

int SparsePoly::total_degree() const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& [m, c] : terms_) {
    int s = 0;
    for (auto e : m) s += e;
    d = std::max(d, s);
  }
  return d;
}

bool SparsePoly::depends_on(std::size_t var_index) const {
  for (const auto& [m, c] : terms_) {
    if (m[var_index] != 0) return true;
  }
  return false;
}

bool SparsePoly::depends_on(std::string_view var) const {
  auto idx = ring_->index_of(var);
  return idx && depends_on(*idx);
}

std::vector<std::size_t> SparsePoly::used_variables() const {
  Monomial seen{};
  for (const auto& [m, c] : terms_) {
    for (std::size_t i = 0; i < kMaxVars; ++i) seen[i] |= (m[i] != 0);
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ring_->size(); ++i) {
    if (seen[i]) out.push_back(i);
  }
  return out;
}

const Rational& SparsePoly::leading_term_coefficient() const {
  if (terms_.empty()) throw Error(ErrorKind::internal, "leading term of zero polynomial");
  return terms_.front().second;
}

const Monomial& SparsePoly::leading_monomial() const {
  if (terms_.empty()) throw Error(ErrorKind::internal, "leading term of zero polynomial");
  return terms_.front().first;
}

int SparsePoly::sign_of_leading_term() const {
  return terms_.empty() ? 0 : sgn(terms_.front().second);
}

SparsePoly SparsePoly::operator-() const {
  std::vector<Term> t = terms_;
  for (auto& [m, c] : t) c = -c;
  return SparsePoly(ring_, std::move(t), true);
}

SparsePoly SparsePoly::scaled(const Rational& factor) const {
  if (factor == 0) return SparsePoly(ring_);
  std::vector<Term> t = terms_;
  for (auto& [m, c] : t) c *= factor;
  return SparsePoly(ring_, std::move(t), true);
}

SparsePoly SparsePoly::embed(const RingPtr& target) const {
  if (ring_ == target || *ring_ == *target) return SparsePoly(target, terms_, true);
  std::array<std::size_t, kMaxVars> map{};
  auto used = used_variables();
  for (std::size_t i = 0; i < ring_->size(); ++i) {
    auto idx = target->index_of(ring_->name(i));
    if (!idx) {
      if (std::find(used.begin(), used.end(), i) != used.end()) {
        throw Error(ErrorKind::ring_mismatch,
                    "cannot embed: variable '" + ring_->name(i) + "' missing from target ring");
      }
      map[i] = kMaxVars;
    } else {
      map[i] = *idx;
    }
  }
  std::vector<Term> t;
  t.reserve(terms_.size());
  for (const auto& [m, c] : terms_) {
    Monomial n{};
    for (std::size_t i = 0; i < ring_->size(); ++i) {
      if (m[i] != 0) n[map[i]] = m[i];
    }
    t.emplace_back(n, c);
  }
  return from_terms(target, std::move(t));
}

SparsePoly add_sub(const SparsePoly& a0, const SparsePoly& b0, bool subtract) {
  RingPtr ring = unify_rings(a0.ring_, b0.ring_);
  const SparsePoly a = a0.embed(ring);
  const SparsePoly b = b0.embed(ring);
  std::vector<SparsePoly::Term> out;
  out.reserve(a.terms_.size() + b.terms_.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.terms_.size() || j < b.terms_.size()) {
    if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].first > b.terms_[j].first)) {
      out.push_back(a.terms_[i++]);
    } else if (i == a.terms_.size() || b.terms_[j].first > a.terms_[i].first) {
      out.emplace_back(b.terms_[j].first, subtract ? Rational(-b.terms_[j].second) : b.terms_[j].second);
      ++j;
    } else {
      Rational c = subtract ? Rational(a.terms_[i].second - b.terms_[j].second)
                            : Rational(a.terms_[i].second + b.terms_[j].second);
      if (c != 0) out.emplace_back(a.terms_[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return SparsePoly(ring, std::move(out), true);
}

SparsePoly multiply(const SparsePoly& a0, const SparsePoly& b0) {
  RingPtr ring = unify_rings(a0.ring_, b0.ring_);
  if (a0.is_zero() || b0.is_zero()) return SparsePoly(ring);
  const SparsePoly a = a0.embed(ring);
  const SparsePoly b = b0.embed(ring);
  const SparsePoly& small = a.size() <= b.size() ? a : b;
  const SparsePoly& large = a.size() <= b.size() ? b : a;
  if (small.size() == 1) {
    const auto& [m, c] = small.terms_[0];
    std::vector<SparsePoly::Term> out;
    out.reserve(large.size());
    for (const auto& [lm, lc] : large.terms_) out.emplace_back(add_monomials(m, lm), lc * c);
    // Multiplying by a monomial preserves the lex order.
    return SparsePoly(ring, std::move(out), true);
  }
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  acc.reserve(a.size() * b.size());
  Rational tmp;
  for (const auto& [ma, ca] : small.terms_) {
    for (const auto& [mb, cb] : large.terms_) {
      mpq_mul(tmp.get_mpq_t(), ca.get_mpq_t(), cb.get_mpq_t());
      auto [it, inserted] = acc.try_emplace(add_monomials(ma, mb));
      if (inserted) {
        it->second = tmp;
      } else {
        mpq_add(it->second.get_mpq_t(), it->second.get_mpq_t(), tmp.get_mpq_t());
      }
    }
  }
  std::vector<SparsePoly::Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) out.emplace_back(m, std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  return SparsePoly(ring, std::move(out), true);
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& other) { return *this = add_sub(*this, other, false); }
SparsePoly& SparsePoly::operator-=(const SparsePoly& other) { return *this = add_sub(*this, other, true); }
SparsePoly& SparsePoly::operator*=(const SparsePoly& other) { return *this = multiply(*this, other); }

SparsePoly operator+(const SparsePoly& a, const SparsePoly& b) { return add_sub(a, b, false); }
SparsePoly operator-(const SparsePoly& a, const SparsePoly& b) { return add_sub(a, b, true); }
SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) { return multiply(a, b); }
SparsePoly operator*(const SparsePoly& a, const Rational& c) { return a.scaled(c); }
SparsePoly operator*(const Rational& c, const SparsePoly& a) { return a.scaled(c); }

bool operator==(const SparsePoly& a, const SparsePoly& b) {
  if (a.ring_ == b.ring_ || *a.ring_ == *b.ring_) return a.terms_ == b.terms_;
  if (a.terms_.size() != b.terms_.size()) return false;
  RingPtr ring = unify_rings(a.ring_, b.ring_);
  return a.embed(ring).terms_ == b.embed(ring).terms_;
}

SparsePoly arith(const SparsePoly& p, const SparsePoly& q, ArithKind kind) {
  switch (kind) {
    case ArithKind::add: return p + q;
    case ArithKind::sub: return p - q;
    case ArithKind::mul: return p * q;
  }
  throw Error(ErrorKind::internal, "unknown arithmetic kind");
}

SparsePoly pow(const SparsePoly& p, unsigned exponent) {
  SparsePoly result(p.ring(), 1);
  SparsePoly base = p;
  while (exponent > 0) {
    if (exponent & 1u) result *= base;
    exponent >>= 1;
    if (exponent > 0) base *= base;
  }
  return result;
}

// ---------------------------------------------------------------- serialization

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }),
          s.end());
  Rational q;
  if (s.empty() || q.set_str(s, 10) != 0) {
    throw Error(ErrorKind::parse, "malformed rational '" + std::string(text) + "'");
  }
  if (q.get_den() == 0) throw Error(ErrorKind::parse, "zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

std::string SparsePoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool negative = c < 0;
    Rational mag = abs(c);
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    std::vector<std::string> factors;
    for (std::size_t i = 0; i < ring_->size(); ++i) {
      if (m[i] == 0) continue;
      std::string f = ring_->name(i);
      if (m[i] > 1) f += "^" + std::to_string(m[i]);
      factors.push_back(std::move(f));
    }
    if (factors.empty() || mag != 1) {
      os << mag.get_str();
      if (!factors.empty()) os << "*";
    }
    for (std::size_t k = 0; k < factors.size(); ++k) {
      if (k) os << "*";
      os << factors[k];
    }
  }
  return os.str();
}

SparsePoly parse_polynomial(std::string_view text, RingPtr ring) {
  if (!ring) ring = make_ring(collect_identifiers(text));
  ParsedRational r = parse_rational_expression(text, ring);
  if (!r.den.is_constant()) {
    throw Error(ErrorKind::parse, "expression is not a polynomial: '" + std::string(text) + "'");
  }
  return r.num.scaled(Rational(1) / r.den.constant_value());
}

// ---------------------------------------------------------------- calculus and substitution

SparsePoly derivative(const SparsePoly& p, std::string_view var) {
  auto idx = p.ring()->index_of(var);
  if (!idx) return SparsePoly(p.ring());
  std::vector<SparsePoly::Term> out;
  for (const auto& [m, c] : p.terms()) {
    if (m[*idx] == 0) continue;
    Monomial n = m;
    n[*idx] -= 1;
    out.emplace_back(n, c * m[*idx]);
  }
  // Lowering one exponent by one keeps distinct monomials distinct, but may
  // reorder them relative to each other.
  return SparsePoly::from_terms(p.ring(), std::move(out));
}

std::vector<SparsePoly> coefficients(const SparsePoly& p, std::size_t var_index) {
  int deg = p.degree(var_index);
  if (deg < 0) return {};
  std::vector<std::vector<SparsePoly::Term>> buckets(deg + 1);
  for (const auto& [m, c] : p.terms()) {
    Monomial n = m;
    int k = n[var_index];
    n[var_index] = 0;
    buckets[k].emplace_back(n, c);
  }
  std::vector<SparsePoly> out;
  out.reserve(deg + 1);
  // Terms sharing an exponent of var keep their relative lex order.
  for (auto& b : buckets) out.push_back(SparsePoly::from_terms(p.ring(), std::move(b)));
  return out;
}

SparsePoly from_coefficients(const RingPtr& ring, std::size_t var_index,
                             const std::vector<SparsePoly>& coeffs) {
  std::vector<SparsePoly::Term> out;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    SparsePoly c = coeffs[k].embed(ring);
    for (const auto& [m, v] : c.terms()) {
      Monomial n = m;
      if (n[var_index] != 0) throw Error(ErrorKind::internal, "coefficient depends on main variable");
      n[var_index] = static_cast<Exponent>(k);
      out.emplace_back(n, v);
    }
  }
  return SparsePoly::from_terms(ring, std::move(out));
}

SparsePoly coefficient(const SparsePoly& p, std::string_view var, int k) {
  auto idx = p.ring()->index_of(var);
  if (!idx) return k == 0 ? p : SparsePoly(p.ring());
  std::vector<SparsePoly::Term> out;
  for (const auto& [m, c] : p.terms()) {
    if (m[*idx] != k) continue;
    Monomial n = m;
    n[*idx] = 0;
    out.emplace_back(n, c);
  }
  return SparsePoly::from_terms(p.ring(), std::move(out));
}

SparsePoly leading_coefficient(const SparsePoly& p, std::string_view var) {
  if (p.is_zero()) return p;
  return coefficient(p, var, p.degree(var));
}

SparsePoly substitute(const SparsePoly& p, std::string_view var, const SparsePoly& q) {
  auto idx = p.ring()->index_of(var);
  if (!idx || !p.depends_on(*idx)) return p;
  auto cs = coefficients(p, *idx);
  SparsePoly acc = cs.back();
  for (int k = int(cs.size()) - 2; k >= 0; --k) acc = acc * q + cs[k];
  return acc;
}

SparsePoly substitute(const SparsePoly& p, std::string_view var, const Rational& value) {
  std::map<std::string, Rational> values{{std::string(var), value}};
  return substitute(p, values);
}

SparsePoly substitute(const SparsePoly& p, const std::map<std::string, Rational>& values) {
  const RingPtr& ring = p.ring();
  std::vector<std::pair<std::size_t, const Rational*>> active;
  for (const auto& [name, v] : values) {
    if (auto idx = ring->index_of(name)) active.emplace_back(*idx, &v);
  }
  if (active.empty()) return p;
  std::vector<std::vector<Rational>> powers(active.size());
  for (std::size_t a = 0; a < active.size(); ++a) {
    int deg = std::max(p.degree(active[a].first), 0);
    powers[a].resize(deg + 1);
    powers[a][0] = 1;
    for (int k = 1; k <= deg; ++k) powers[a][k] = powers[a][k - 1] * *active[a].second;
  }
  std::vector<SparsePoly::Term> out;
  out.reserve(p.size());
  for (const auto& [m, c] : p.terms()) {
    Monomial n = m;
    Rational coef = c;
    for (std::size_t a = 0; a < active.size(); ++a) {
      auto e = n[active[a].first];
      if (e != 0) {
        coef *= powers[a][e];
        n[active[a].first] = 0;
      }
    }
    if (coef != 0) out.emplace_back(n, std::move(coef));
  }
  return SparsePoly::from_terms(ring, std::move(out));
}

SparsePoly substitute_square(const SparsePoly& p, std::string_view var, const SparsePoly& q) {
  auto idx = p.ring()->index_of(var);
  if (!idx || !p.depends_on(*idx)) return p;
  auto cs = coefficients(p, *idx);
  for (std::size_t k = 1; k < cs.size(); k += 2) {
    if (!cs[k].is_zero()) {
      throw Error(ErrorKind::internal,
                  "odd power of " + std::string(var) + " in a function expected to be even");
    }
  }
  SparsePoly acc(p.ring());
  int top = int(cs.size()) - 1;
  if (top % 2 != 0) --top;
  for (int k = top; k >= 0; k -= 2) acc = acc * q + cs[k];
  return acc;
}

SparsePoly reflect(const SparsePoly& p, std::string_view var) {
  auto idx = p.ring()->index_of(var);
  if (!idx) return p;
  std::vector<SparsePoly::Term> out(p.terms().begin(), p.terms().end());
  for (auto& [m, c] : out) {
    if (m[*idx] % 2 == 1) c = -c;
  }
  return SparsePoly::from_terms(p.ring(), std::move(out));
}

Rational evaluate(const SparsePoly& p, const std::map<std::string, Rational>& values) {
  SparsePoly s = substitute(p, values);
  if (!s.is_constant()) {
    throw Error(ErrorKind::invalid_argument, "point does not fix every variable of " + p.to_string());
  }
  return s.constant_value();
}

int sign_at_point(const SparsePoly& p, const std::map<std::string, Rational>& values) {
  return sgn(evaluate(p, values));
}

// ---------------------------------------------------------------- normalization

Rational integer_content(const SparsePoly& p) {
  if (p.is_zero()) return Rational(1);
  Integer num = 0;
  Integer den = 1;
  for (const auto& [m, c] : p.terms()) {
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

SparsePoly primitive_part(const SparsePoly& p) {
  if (p.is_zero()) return p;
  Rational c = integer_content(p);
  if (p.leading_term_coefficient() < 0) c = -c;
  if (c == 1) return p;
  return p.scaled(Rational(1) / c);
}

SparsePoly monic(const SparsePoly& p) {
  if (p.is_zero()) return p;
  return p.scaled(Rational(1) / p.leading_term_coefficient());
}

bool is_associate(const SparsePoly& p, const SparsePoly& q) {
  if (p.is_zero() || q.is_zero()) return p.is_zero() && q.is_zero();
  if (p.size() != q.size()) return false;
  return monic(p) == monic(q);
}

// ---------------------------------------------------------------- exact division

namespace {

std::optional<std::size_t> first_used(const SparsePoly& a, const SparsePoly& b) {
  Monomial seen{};
  for (const auto& [m, c] : a.terms())
    for (std::size_t i = 0; i < kMaxVars; ++i) seen[i] |= (m[i] != 0);
  for (const auto& [m, c] : b.terms())
    for (std::size_t i = 0; i < kMaxVars; ++i) seen[i] |= (m[i] != 0);
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    if (seen[i]) return i;
  }
  return std::nullopt;
}

std::optional<SparsePoly> divide_exact_same_ring(const SparsePoly& p, const SparsePoly& d) {
  const RingPtr& ring = p.ring();
  if (p.is_zero()) return SparsePoly(ring);
  if (d.is_constant()) return p.scaled(Rational(1) / d.constant_value());
  if (d.size() == 1) {
    const auto& [dm, dc] = d.terms()[0];
    std::vector<SparsePoly::Term> out;
    out.reserve(p.size());
    Rational inv = Rational(1) / dc;
    for (const auto& [m, c] : p.terms()) {
      if (!divides(dm, m)) return std::nullopt;
      Monomial n = m;
      for (std::size_t i = 0; i < kMaxVars; ++i) n[i] -= dm[i];
      out.emplace_back(n, c * inv);
    }
    return SparsePoly::from_terms(ring, std::move(out));
  }
  if (!divides(d.leading_monomial(), p.leading_monomial())) return std::nullopt;
  std::size_t v = *first_used(p, d);
  if (!d.depends_on(v)) {
    auto pc = coefficients(p, v);
    std::vector<SparsePoly> qc(pc.size(), SparsePoly(ring));
    for (std::size_t k = 0; k < pc.size(); ++k) {
      if (pc[k].is_zero()) continue;
      auto q = divide_exact_same_ring(pc[k], d);
      if (!q) return std::nullopt;
      qc[k] = std::move(*q);
    }
    return from_coefficients(ring, v, qc);
  }
  int dp = p.degree(v);
  int dd = d.degree(v);
  if (dp < dd) return std::nullopt;
  auto rem = coefficients(p, v);
  auto dc = coefficients(d, v);
  std::vector<SparsePoly> qc(dp - dd + 1, SparsePoly(ring));
  for (int k = dp; k >= dd; --k) {
    if (rem[k].is_zero()) continue;
    auto q = divide_exact_same_ring(rem[k], dc[dd]);
    if (!q) return std::nullopt;
    for (int i = 0; i <= dd; ++i) {
      if (!dc[i].is_zero()) rem[k - dd + i] -= *q * dc[i];
    }
    qc[k - dd] = std::move(*q);
  }
  for (int k = 0; k < dd; ++k) {
    if (!rem[k].is_zero()) return std::nullopt;
  }
  return from_coefficients(ring, v, qc);
}

}  // namespace

std::optional<SparsePoly> divide_exact(const SparsePoly& p, const SparsePoly& d) {
  if (d.is_zero()) throw Error(ErrorKind::invalid_argument, "division by the zero polynomial");
  RingPtr ring = unify_rings(p.ring(), d.ring());
  return divide_exact_same_ring(p.embed(ring), d.embed(ring));
}

SparsePoly divide_or_throw(const SparsePoly& p, const SparsePoly& d) {
  auto q = divide_exact(p, d);
  if (!q) {
    throw Error(ErrorKind::internal, "inexact division of " + p.to_string() + " by " + d.to_string());
  }
  return std::move(*q);
}

// ---------------------------------------------------------------- gcd

namespace {

SparsePoly normalize_gcd(const SparsePoly& g) { return primitive_part(g); }

Integer max_norm(const SparsePoly& p) {
  Integer n = 0;
  for (const auto& [m, c] : p.terms()) {
    Integer a = abs(c.get_num());
    if (a > n) n = a;
  }
  return n;
}

Integer integer_gcd_of_coefficients(const SparsePoly& p) {
  Integer g = 0;
  for (const auto& [m, c] : p.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
  return g;
}

SparsePoly evaluate_at_integer(const SparsePoly& p, std::size_t v, const Integer& x) {
  int deg = std::max(p.degree(v), 0);
  std::vector<Integer> powers(deg + 1);
  powers[0] = 1;
  for (int k = 1; k <= deg; ++k) powers[k] = powers[k - 1] * x;
  std::unordered_map<Monomial, Integer, MonomialHash> acc;
  Integer tmp;
  for (const auto& [m, c] : p.terms()) {
    Monomial n = m;
    auto e = n[v];
    n[v] = 0;
    mpz_mul(tmp.get_mpz_t(), c.get_num_mpz_t(), powers[e].get_mpz_t());
    auto [it, inserted] = acc.try_emplace(n);
    if (inserted) {
      it->second = tmp;
    } else {
      it->second += tmp;
    }
  }
  std::vector<SparsePoly::Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) out.emplace_back(m, Rational(c));
  }
  return SparsePoly::from_terms(p.ring(), std::move(out));
}

// Balanced x-adic expansion of every coefficient back into powers of v.
SparsePoly interpolate(const SparsePoly& h, std::size_t v, const Integer& x) {
  Integer half = x / 2;
  std::vector<SparsePoly::Term> out;
  Integer c;
  Integer digit;
  for (const auto& [m, coef] : h.terms()) {
    c = coef.get_num();
    unsigned k = 0;
    while (c != 0) {
      mpz_fdiv_r(digit.get_mpz_t(), c.get_mpz_t(), x.get_mpz_t());
      if (digit > half) digit -= x;
      if (digit != 0) {
        Monomial n = m;
        if (k > 0xFFFFu) throw Error(ErrorKind::internal, "exponent overflow in interpolation");
        n[v] = static_cast<Exponent>(k);
        out.emplace_back(n, Rational(digit));
      }
      c -= digit;
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), x.get_mpz_t());
      ++k;
    }
  }
  return SparsePoly::from_terms(h.ring(), std::move(out));
}

struct HeuGcd {
  SparsePoly h;
  SparsePoly cff;
  SparsePoly cfg;
};

// Heuristic gcd (Char, Geddes, Gonnet) on integer-coefficient polynomials.
std::optional<HeuGcd> heu_gcd(const SparsePoly& f, const SparsePoly& g, int depth) {
  const RingPtr& ring = f.ring();
  if (f.is_zero() || g.is_zero()) return std::nullopt;
  if (f.is_constant() && g.is_constant()) {
    Integer a = f.constant_value().get_num();
    Integer b = g.constant_value().get_num();
    Integer h;
    mpz_gcd(h.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return HeuGcd{SparsePoly(ring, Rational(h)), SparsePoly(ring, Rational(a / h)),
                  SparsePoly(ring, Rational(b / h))};
  }
  Integer cf = integer_gcd_of_coefficients(f);
  Integer cg = integer_gcd_of_coefficients(g);
  Integer gc;
  mpz_gcd(gc.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());
  SparsePoly ff0 = f.scaled(Rational(1, 1) / Rational(gc));
  SparsePoly gg0 = g.scaled(Rational(1, 1) / Rational(gc));

  // Evaluate the used variable of smallest degree to keep integers small.
  std::size_t v = kMaxVars;
  int best = 1 << 30;
  Monomial seen{};
  for (const auto* poly : {&ff0, &gg0})
    for (const auto& [m, c] : poly->terms())
      for (std::size_t i = 0; i < kMaxVars; ++i) seen[i] |= (m[i] != 0);
  for (std::size_t i = 0; i < ring->size(); ++i) {
    if (!seen[i]) continue;
    int d = std::max(ff0.degree(i), gg0.degree(i));
    if (d < best) {
      best = d;
      v = i;
    }
  }

  Integer nf = max_norm(ff0);
  Integer ng = max_norm(gg0);
  Integer b = 2 * std::min(nf, ng) + 29;
  Integer sq;
  mpz_sqrt(sq.get_mpz_t(), b.get_mpz_t());
  Integer x = std::min(b, Integer(99 * sq));
  Integer lf = abs(ff0.leading_term_coefficient().get_num());
  Integer lg = abs(gg0.leading_term_coefficient().get_num());
  Integer alt = 2 * std::min(Integer(nf / lf), Integer(ng / lg)) + 2;
  if (alt > x) x = alt;

  for (int attempt = 0; attempt < 6; ++attempt) {
    SparsePoly fe = evaluate_at_integer(ff0, v, x);
    SparsePoly ge = evaluate_at_integer(gg0, v, x);
    if (!fe.is_zero() && !ge.is_zero()) {
      auto sub = heu_gcd(fe, ge, depth + 1);
      if (!sub) return std::nullopt;
      SparsePoly h = interpolate(sub->h, v, x);
      h = h.scaled(Rational(1) / Rational(integer_gcd_of_coefficients(h)));
      if (auto cff = divide_exact_same_ring(ff0, h)) {
        if (auto cfg = divide_exact_same_ring(gg0, h)) {
          return HeuGcd{h.scaled(Rational(gc)), std::move(*cff), std::move(*cfg)};
        }
      }
      SparsePoly cff = interpolate(sub->cff, v, x);
      if (!cff.is_zero()) {
        if (auto hh = divide_exact_same_ring(ff0, cff)) {
          if (auto cfg = divide_exact_same_ring(gg0, *hh)) {
            return HeuGcd{hh->scaled(Rational(gc)), std::move(cff), std::move(*cfg)};
          }
        }
      }
      SparsePoly cfg = interpolate(sub->cfg, v, x);
      if (!cfg.is_zero()) {
        if (auto hh = divide_exact_same_ring(gg0, cfg)) {
          if (auto cff2 = divide_exact_same_ring(ff0, *hh)) {
            return HeuGcd{hh->scaled(Rational(gc)), std::move(*cff2), std::move(cfg)};
          }
        }
      }
    }
    Integer s1;
    mpz_sqrt(s1.get_mpz_t(), x.get_mpz_t());
    mpz_sqrt(s1.get_mpz_t(), s1.get_mpz_t());
    x = 73794 * x * s1 / 27011;
  }
  return std::nullopt;
}

SparsePoly prem_in(const SparsePoly& a, const SparsePoly& b, std::size_t v) {
  int da = a.degree(v);
  int db = b.degree(v);
  auto bc = coefficients(b, v);
  const SparsePoly& lb = bc.back();
  std::vector<SparsePoly> r = coefficients(a, v);
  for (int k = da; k >= db; --k) {
    if (r[k].is_zero()) {
      // Keep the normalization lc(b)^(da-db+1) even when a step is skipped.
      for (auto& c : r) c *= lb;
      continue;
    }
    SparsePoly lead = r[k];
    for (int i = 0; i < k; ++i) r[i] *= lb;
    for (int i = 0; i < db; ++i) r[k - db + i] -= lead * bc[i];
    r[k] = SparsePoly(a.ring());
  }
  r.resize(std::max(db, 0));
  return from_coefficients(a.ring(), v, r);
}

SparsePoly remove_content(const SparsePoly& p, std::size_t v);

SparsePoly content_index(const SparsePoly& p, std::size_t v) {
  auto cs = coefficients(p, v);
  SparsePoly g(p.ring());
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    g = gcd_poly(g, c);
    if (g.is_constant()) return SparsePoly(p.ring(), 1);
  }
  return g;
}

SparsePoly remove_content(const SparsePoly& p, std::size_t v) {
  SparsePoly c = content_index(p, v);
  if (c.is_constant()) return primitive_part(p);
  return primitive_part(divide_or_throw(p, c));
}

// Recursive primitive PRS fallback.
SparsePoly prs_gcd(const SparsePoly& f, const SparsePoly& g) {
  if (f.is_zero()) return normalize_gcd(g);
  if (g.is_zero()) return normalize_gcd(f);
  if (f.is_constant() || g.is_constant()) return SparsePoly(f.ring(), 1);
  std::size_t v = *first_used(f, g);
  if (!f.depends_on(v)) return gcd_poly(f, content_index(g, v));
  if (!g.depends_on(v)) return gcd_poly(content_index(f, v), g);
  SparsePoly cf = content_index(f, v);
  SparsePoly cg = content_index(g, v);
  SparsePoly gc = gcd_poly(cf, cg);
  SparsePoly a = primitive_part(divide_or_throw(f, cf));
  SparsePoly b = primitive_part(divide_or_throw(g, cg));
  if (a.degree(v) < b.degree(v)) std::swap(a, b);
  while (!b.is_zero() && b.degree(v) > 0) {
    SparsePoly r = prem_in(a, b, v);
    a = b;
    b = r.is_zero() ? r : remove_content(r, v);
  }
  SparsePoly part = b.is_zero() ? remove_content(a, v) : SparsePoly(f.ring(), 1);
  return normalize_gcd(gc * part);
}

}  // namespace

SparsePoly gcd_poly(const SparsePoly& p0, const SparsePoly& q0) {
  RingPtr ring = unify_rings(p0.ring(), q0.ring());
  SparsePoly p = p0.embed(ring);
  SparsePoly q = q0.embed(ring);
  if (p.is_zero()) return normalize_gcd(q);
  if (q.is_zero()) return normalize_gcd(p);
  if (p.is_constant() || q.is_constant()) return SparsePoly(ring, 1);
  SparsePoly pi = primitive_part(p);
  SparsePoly qi = primitive_part(q);
  if (pi == qi) return pi;
  if (auto h = heu_gcd(pi, qi, 0)) return normalize_gcd(h->h);
  return prs_gcd(pi, qi);
}

SparsePoly lcm_poly(const SparsePoly& p, const SparsePoly& q) {
  if (p.is_zero() || q.is_zero()) return SparsePoly(unify_rings(p.ring(), q.ring()));
  SparsePoly g = gcd_poly(p, q);
  return primitive_part(divide_or_throw(p, g) * q);
}

SparsePoly content_in(const SparsePoly& p, std::string_view var) {
  auto idx = p.ring()->index_of(var);
  if (!idx || !p.depends_on(*idx)) return normalize_gcd(p);
  return content_index(p, *idx);
}

// ---------------------------------------------------------------- squarefree

SparsePoly squarefree_part(const SparsePoly& p, std::string_view primary_var) {
  if (p.is_zero()) throw Error(ErrorKind::invalid_argument, "squarefree part of the zero polynomial");
  if (p.is_constant()) return SparsePoly(p.ring(), 1);
  auto idx = p.ring()->index_of(primary_var);
  if (!idx || !p.depends_on(*idx)) return squarefree_part(p);
  SparsePoly c = content_index(p, *idx);
  SparsePoly pp = c.is_constant() ? primitive_part(p) : primitive_part(divide_or_throw(p, c));
  SparsePoly g = gcd_poly(pp, derivative(pp, primary_var));
  SparsePoly sf = g.is_constant() ? pp : divide_or_throw(pp, g);
  if (!c.is_constant()) sf *= squarefree_part(c);
  return primitive_part(sf);
}

SparsePoly squarefree_part(const SparsePoly& p) {
  if (p.is_zero()) throw Error(ErrorKind::invalid_argument, "squarefree part of the zero polynomial");
  auto used = p.used_variables();
  if (used.empty()) return SparsePoly(p.ring(), 1);
  return squarefree_part(p, p.ring()->name(used.front()));
}

std::vector<SquarefreeFactor> squarefree_decomposition(const SparsePoly& p, std::string_view var) {
  std::vector<SquarefreeFactor> out;
  auto idx = p.ring()->index_of(var);
  if (p.is_zero() || !idx || !p.depends_on(*idx)) return out;
  SparsePoly c = content_index(p, *idx);
  SparsePoly a = c.is_constant() ? primitive_part(p) : primitive_part(divide_or_throw(p, c));
  SparsePoly da = derivative(a, var);
  SparsePoly g = gcd_poly(a, da);
  SparsePoly b = divide_or_throw(a, g);
  SparsePoly cc = divide_or_throw(da, g);
  SparsePoly d = cc - derivative(b, var);
  int i = 1;
  while (b.depends_on(*idx)) {
    SparsePoly ai = gcd_poly(b, d);
    b = divide_or_throw(b, ai);
    cc = divide_or_throw(d, ai);
    d = cc - derivative(b, var);
    if (!ai.is_constant()) out.push_back({primitive_part(ai), i});
    ++i;
  }
  return out;
}

std::vector<SparsePoly> content_split(const SparsePoly& p) {
  std::vector<SparsePoly> out;
  auto rec = [&](auto&& self, const SparsePoly& q) -> void {
    if (q.is_zero() || q.is_constant()) return;
    for (std::size_t v : q.used_variables()) {
      SparsePoly c = content_index(q, v);
      if (!c.is_constant()) {
        self(self, c);
        self(self, divide_or_throw(q, c));
        return;
      }
    }
    out.push_back(squarefree_part(q));
  };
  rec(rec, p);
  std::vector<SparsePoly> unique;
  for (auto& f : out) {
    if (std::none_of(unique.begin(), unique.end(), [&](const SparsePoly& u) { return u == f; })) {
      unique.push_back(std::move(f));
    }
  }
  return unique;
}

std::vector<SparsePoly> coprime_basis(const std::vector<SparsePoly>& polys) {
  std::vector<SparsePoly> basis;
  for (const auto& input : polys) {
    std::vector<SparsePoly> pending = content_split(input);
    while (!pending.empty()) {
      SparsePoly a = std::move(pending.back());
      pending.pop_back();
      if (a.is_zero() || a.is_constant()) continue;
      a = primitive_part(a);
      bool merged = false;
      for (std::size_t i = 0; i < basis.size(); ++i) {
        SparsePoly g = gcd_poly(a, basis[i]);
        if (g.is_constant()) continue;
        SparsePoly b = std::move(basis[i]);
        basis.erase(basis.begin() + std::ptrdiff_t(i));
        SparsePoly ag = divide_or_throw(a, g);
        SparsePoly bg = divide_or_throw(b, g);
        pending.push_back(g);
        if (!ag.is_constant()) pending.push_back(ag);
        if (!bg.is_constant()) pending.push_back(bg);
        merged = true;
        break;
      }
      if (!merged) basis.push_back(std::move(a));
    }
  }
  std::sort(basis.begin(), basis.end(), [](const SparsePoly& x, const SparsePoly& y) {
    if (x.total_degree() != y.total_degree()) return x.total_degree() < y.total_degree();
    return x.to_string() < y.to_string();
  });
  return basis;
}

}  // namespace linf
