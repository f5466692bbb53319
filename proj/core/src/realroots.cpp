#include "linf/realroots.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace linf {

namespace {

using Dense = std::vector<Rational>;
using DenseZ = std::vector<Integer>;

std::optional<std::size_t> single_variable(const SparsePoly& f) {
  auto used = f.used_variables();
  if (used.size() > 1) {
    throw Error(ErrorKind::invalid_argument, "expected a univariate polynomial, got " + f.to_string());
  }
  if (used.empty()) return std::nullopt;
  return used.front();
}

Dense to_dense(const SparsePoly& f) {
  auto v = single_variable(f);
  if (f.is_zero()) return {};
  if (!v) return {f.constant_value()};
  Dense out(f.degree(*v) + 1);
  for (const auto& [m, c] : f.terms()) out[m[*v]] = c;
  return out;
}

DenseZ to_dense_integer(const SparsePoly& f) {
  SparsePoly p = primitive_part(f);
  Dense d = to_dense(p);
  DenseZ out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i].get_num();
  return out;
}

SparsePoly from_dense(const DenseZ& d, const RingPtr& ring, std::size_t var) {
  std::vector<SparsePoly::Term> t;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (d[k] == 0) continue;
    Monomial m{};
    m[var] = static_cast<Exponent>(k);
    t.emplace_back(m, Rational(d[k]));
  }
  return SparsePoly::from_terms(ring, std::move(t));
}

int sign_dense(const DenseZ& f, const Rational& x) {
  if (f.empty()) return 0;
  // Horner on numerator with denominator powers: sum f_k a^k b^(n-k).
  const Integer& a = x.get_num();
  const Integer& b = x.get_den();
  Integer acc = f.back();
  Integer bpow = 1;
  for (std::size_t k = f.size() - 1; k-- > 0;) {
    bpow *= b;
    acc = acc * a + f[k] * bpow;
  }
  return sgn(acc);
}

int variations(const DenseZ& c) {
  int count = 0;
  int last = 0;
  for (const auto& v : c) {
    int s = sgn(v);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

void taylor_shift_one(DenseZ& c) {
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = n - 1; j > i; --j) c[j - 1] += c[j];
  }
}

int descartes_dense(const DenseZ& f, const Rational& low, const Rational& high) {
  if (f.size() <= 1) return 0;
  // x = (a + b t) / c maps t in (0, 1) onto (low, high).
  Integer c;
  mpz_lcm(c.get_mpz_t(), low.get_den_mpz_t(), high.get_den_mpz_t());
  Integer a = low.get_num() * (c / low.get_den());
  Integer b = high.get_num() * (c / high.get_den()) - a;
  const std::size_t n = f.size() - 1;
  std::vector<Integer> cpow(n + 1);
  cpow[0] = 1;
  for (std::size_t k = 1; k <= n; ++k) cpow[k] = cpow[k - 1] * c;
  // g(t) = c^n f((a + b t)/c) = sum_k f_k c^(n-k) (a + b t)^k, by Horner in (a + b t).
  DenseZ g{f[n]};
  for (std::size_t k = n; k-- > 0;) {
    DenseZ next(g.size() + 1);
    for (std::size_t i = 0; i < g.size(); ++i) {
      next[i] += g[i] * a;
      next[i + 1] += g[i] * b;
    }
    next[0] += f[k] * cpow[n - k];
    g = std::move(next);
  }
  // (t + 1)^n g(1 / (t + 1)): reverse, then shift by one.
  std::reverse(g.begin(), g.end());
  taylor_shift_one(g);
  return variations(g);
}

Integer root_bound_power(const DenseZ& f) {
  // Cauchy: 1 + max |f_k / f_n|, rounded up to a power of two that exceeds it.
  Rational m = 0;
  Rational lead = abs(Rational(f.back()));
  for (std::size_t k = 0; k + 1 < f.size(); ++k) {
    Rational r = abs(Rational(f[k])) / lead;
    if (r > m) m = r;
  }
  Rational bound = m + 1;
  Integer p = 1;
  while (Rational(p) <= bound) p *= 2;
  return p;
}

struct Isolator {
  const DenseZ& f;
  std::vector<IsolatingInterval> out;

  void run(const Rational& low, const Rational& high) {
    int v = descartes_dense(f, low, high);
    if (v == 0) return;
    if (v == 1) {
      out.push_back({low, high, false});
      return;
    }
    Rational mid = (low + high) / 2;
    run(low, mid);
    if (sign_dense(f, mid) == 0) out.push_back({mid, mid, true});
    run(mid, high);
  }
};

// Moves an endpoint that is itself a root inward until no root lies between.
void clear_endpoints(const DenseZ& f, IsolatingInterval& iv) {
  if (sign_dense(f, iv.low) == 0) {
    Rational eps = iv.width() / 2;
    for (;;) {
      Rational cand = iv.low + eps;
      if (sign_dense(f, cand) != 0 && descartes_dense(f, iv.low, cand) == 0) {
        iv.low = cand;
        break;
      }
      eps /= 2;
    }
  }
  if (sign_dense(f, iv.high) == 0) {
    Rational eps = iv.width() / 2;
    for (;;) {
      Rational cand = iv.high - eps;
      if (sign_dense(f, cand) != 0 && descartes_dense(f, cand, iv.high) == 0) {
        iv.high = cand;
        break;
      }
      eps /= 2;
    }
  }
}

void snap_to_rational(const DenseZ& f, IsolatingInterval& iv) {
  if (iv.exact) return;
  Rational s = simplest_rational_between(iv.low, iv.high);
  if (sign_dense(f, s) == 0) iv = {s, s, true};
}

// One bisection step on a non-exact interval with a sign change.
void bisect(const DenseZ& f, IsolatingInterval& iv) {
  Rational mid = (iv.low + iv.high) / 2;
  int sm = sign_dense(f, mid);
  if (sm == 0) {
    iv = {mid, mid, true};
    return;
  }
  if (sm == sign_dense(f, iv.low)) {
    iv.low = mid;
  } else {
    iv.high = mid;
  }
}

struct RationalRange {
  Rational lo;
  Rational hi;
};

RationalRange mul(const RationalRange& x, const RationalRange& y) {
  Rational p[4] = {x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

RationalRange eval_range(const Dense& q, const IsolatingInterval& iv) {
  RationalRange x{iv.low, iv.high};
  RationalRange acc{q.back(), q.back()};
  for (std::size_t k = q.size() - 1; k-- > 0;) {
    acc = mul(acc, x);
    acc.lo += q[k];
    acc.hi += q[k];
  }
  return acc;
}

std::strong_ordering order(const Rational& a, const Rational& b) {
  int c = cmp(a, b);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

SparsePoly dense_gcd(const DenseZ& a, const DenseZ& b) {
  static const RingPtr ring = make_ring({"x"});
  return gcd_poly(from_dense(a, ring, 0), from_dense(b, ring, 0));
}

}  // namespace

// ---------------------------------------------------------------- AlgebraicNumber

AlgebraicNumber::AlgebraicNumber(SparsePoly defining, IsolatingInterval interval)
    : defining_(std::move(defining)), interval_(std::move(interval)) {
  single_variable(defining_);
  if (defining_.is_constant()) {
    throw Error(ErrorKind::invalid_argument, "algebraic number needs a nonconstant defining polynomial");
  }
  if (interval_.low > interval_.high) {
    throw Error(ErrorKind::invalid_argument, "isolating interval has low > high");
  }
}

AlgebraicNumber AlgebraicNumber::from_rational(const Rational& value, std::string var) {
  RingPtr ring = make_ring({std::move(var)});
  SparsePoly x = SparsePoly::variable(ring, ring->name(0));
  SparsePoly def = x.scaled(Rational(value.get_den())) - SparsePoly(ring, Rational(value.get_num()));
  return AlgebraicNumber(primitive_part(def), {value, value, true});
}

double AlgebraicNumber::to_double() const {
  if (is_exact()) return interval_.low.get_d();
  Rational scale = std::max<Rational>(abs(interval_.low), abs(interval_.high));
  if (scale < 1) scale = 1;
  Rational target = scale / Rational(Integer(1) << 60);
  return refine(*this, target).midpoint().get_d();
}

std::string AlgebraicNumber::to_string() const {
  std::ostringstream os;
  os << "root of " << defining_.to_string() << " in [" << interval_.low.get_str() << ", "
     << interval_.high.get_str() << "]";
  return os.str();
}

// ---------------------------------------------------------------- operations

int sign_at(const SparsePoly& f, const Rational& x) {
  Dense d = to_dense(f);
  Rational acc = 0;
  for (std::size_t k = d.size(); k-- > 0;) acc = acc * x + d[k];
  return sgn(acc);
}

int descartes_bound(const SparsePoly& f, const Rational& low, const Rational& high) {
  if (f.is_zero()) throw Error(ErrorKind::invalid_argument, "Descartes bound of the zero polynomial");
  if (!(low < high)) throw Error(ErrorKind::invalid_argument, "empty interval");
  return descartes_dense(to_dense_integer(f), low, high);
}

std::vector<AlgebraicNumber> isolate(const SparsePoly& f) {
  if (f.is_zero()) throw Error(ErrorKind::invalid_argument, "cannot isolate roots of the zero polynomial");
  single_variable(f);
  if (f.is_constant()) return {};
  SparsePoly sf = squarefree_part(f);
  DenseZ d = to_dense_integer(sf);
  Integer bound = root_bound_power(d);
  Isolator iso{d, {}};
  iso.run(Rational(-bound), Rational(bound));
  std::vector<AlgebraicNumber> out;
  out.reserve(iso.out.size());
  // A rational root has a denominator dividing lc, and two distinct such
  // rationals are at least 1/lc^2 apart; below that width the simplest
  // rational in the interval is the root whenever the root is rational.
  Rational rational_gap(1, Integer(d.back() * d.back()));
  for (auto& iv : iso.out) {
    if (!iv.exact) {
      clear_endpoints(d, iv);
      int steps = 0;
      while (!iv.exact && iv.width() >= rational_gap && steps++ < 4096) bisect(d, iv);
      snap_to_rational(d, iv);
    }
    out.emplace_back(sf, iv);
  }
  return out;
}

AlgebraicNumber refine(const AlgebraicNumber& a, const Rational& width) {
  if (width <= 0) throw Error(ErrorKind::invalid_argument, "refinement width must be positive");
  if (a.is_exact() || a.interval().width() <= width) return a;
  DenseZ d = to_dense_integer(a.defining());
  IsolatingInterval iv = a.interval();
  int steps = 0;
  while (!iv.exact && iv.width() > width) {
    bisect(d, iv);
    if (++steps % 8 == 0) snap_to_rational(d, iv);
  }
  return AlgebraicNumber(a.defining(), iv);
}

int sign_at_algebraic(const SparsePoly& q, const AlgebraicNumber& a) {
  Dense qd = to_dense(q);
  if (qd.empty()) return 0;
  if (qd.size() == 1) return sgn(qd[0]);
  if (a.is_exact()) return sign_at(q, a.interval().low);
  DenseZ def = to_dense_integer(a.defining());
  IsolatingInterval iv = a.interval();
  SparsePoly g = dense_gcd(def, to_dense_integer(q));
  if (!g.is_constant()) {
    DenseZ gd = to_dense_integer(g);
    if (sign_dense(gd, iv.low) * sign_dense(gd, iv.high) < 0) return 0;
  }
  for (;;) {
    if (iv.exact) return sign_at(q, iv.low);
    RationalRange r = eval_range(qd, iv);
    if (r.lo > 0) return 1;
    if (r.hi < 0) return -1;
    bisect(def, iv);
  }
}

std::strong_ordering compare(const AlgebraicNumber& a, const Rational& b) {
  const auto& iv = a.interval();
  if (iv.exact) return order(iv.low, b);
  if (b <= iv.low) return std::strong_ordering::greater;
  if (b >= iv.high) return std::strong_ordering::less;
  DenseZ d = to_dense_integer(a.defining());
  int sb = sign_dense(d, b);
  if (sb == 0) return std::strong_ordering::equal;
  // Same sign as at low means the root lies in (b, high).
  return sb == sign_dense(d, iv.low) ? std::strong_ordering::greater : std::strong_ordering::less;
}

std::strong_ordering compare(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (b.is_exact()) return compare(a, b.interval().low);
  if (a.is_exact()) return 0 <=> compare(b, a.interval().low);
  IsolatingInterval ia = a.interval();
  IsolatingInterval ib = b.interval();
  if (ia.high <= ib.low) return std::strong_ordering::less;
  if (ib.high <= ia.low) return std::strong_ordering::greater;
  DenseZ da = to_dense_integer(a.defining());
  DenseZ db = to_dense_integer(b.defining());
  SparsePoly g = dense_gcd(da, db);
  if (!g.is_constant()) {
    DenseZ gd = to_dense_integer(g);
    Rational lo = std::max(ia.low, ib.low);
    Rational hi = std::min(ia.high, ib.high);
    // Intersection endpoints are interval endpoints of a or b, hence not roots of g.
    if (sign_dense(gd, lo) * sign_dense(gd, hi) < 0) return std::strong_ordering::equal;
  }
  for (;;) {
    if (ia.exact) return 0 <=> compare(AlgebraicNumber(b.defining(), ib), ia.low);
    if (ib.exact) return compare(AlgebraicNumber(a.defining(), ia), ib.low);
    if (ia.high <= ib.low) return std::strong_ordering::less;
    if (ib.high <= ia.low) return std::strong_ordering::greater;
    if (ia.width() >= ib.width()) {
      bisect(da, ia);
    } else {
      bisect(db, ib);
    }
  }
}

Rational simplest_rational_between(const Rational& low, const Rational& high) {
  if (low > high) return simplest_rational_between(high, low);
  if (low <= 0 && high >= 0) return Rational(0);
  if (high < 0) return -simplest_rational_between(-high, -low);
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), low.get_num_mpz_t(), low.get_den_mpz_t());
  if (Rational(fl) == low) return low;
  if (Rational(fl + 1) <= high) return Rational(fl + 1);
  Rational inner = simplest_rational_between(Rational(1) / (high - fl), Rational(1) / (low - fl));
  return Rational(fl) + Rational(1) / inner;
}

}  // namespace linf
