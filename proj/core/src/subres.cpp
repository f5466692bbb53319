#include "linf/subres.hpp"

#include <algorithm>

namespace linf {

namespace {

using Dense = std::vector<SparsePoly>;

int degree_of(const Dense& d) { return int(d.size()) - 1; }

void trim(Dense& d) {
  while (!d.empty() && d.back().is_zero()) d.pop_back();
}

bool is_zero(const Dense& d) { return d.empty(); }

// lc(g)^(deg f - deg g + 1) * f mod g.
Dense prem(Dense r, const Dense& g, const RingPtr& ring) {
  const int dr = degree_of(r);
  const int dg = degree_of(g);
  const SparsePoly& lg = g.back();
  for (int k = dr; k >= dg; --k) {
    if (r[k].is_zero()) {
      for (auto& c : r) c *= lg;
      continue;
    }
    SparsePoly lead = r[k];
    for (int i = 0; i < k; ++i) r[i] *= lg;
    for (int i = 0; i < dg; ++i) r[k - dg + i] -= lead * g[i];
    r[k] = SparsePoly(ring);
  }
  r.resize(std::max(dg, 0));
  trim(r);
  return r;
}

Dense scale(const Dense& d, const SparsePoly& c) {
  Dense out = d;
  for (auto& x : out) x *= c;
  return out;
}

Dense divide(const Dense& d, const SparsePoly& c) {
  Dense out;
  out.reserve(d.size());
  for (const auto& x : d) out.push_back(x.is_zero() ? x : divide_or_throw(x, c));
  return out;
}

SparsePoly pow_poly(const SparsePoly& p, int e) { return pow(p, static_cast<unsigned>(e)); }

struct Setup {
  RingPtr ring;
  std::size_t var;
  Dense p;
  Dense q;
};

Setup prepare(const SparsePoly& p0, const SparsePoly& q0, std::string_view v) {
  if (p0.is_zero() || q0.is_zero()) {
    throw Error(ErrorKind::invalid_argument, "subresultants of the zero polynomial");
  }
  RingPtr ring = unify_rings(p0.ring(), q0.ring());
  auto idx = ring->index_of(v);
  if (!idx) throw Error(ErrorKind::invalid_argument, "variable '" + std::string(v) + "' is not in the ring");
  Setup s{ring, *idx, coefficients(p0.embed(ring), *idx), coefficients(q0.embed(ring), *idx)};
  return s;
}

}  // namespace

SubresultantSequence subresultant_prs(const SparsePoly& p0, const SparsePoly& q0, std::string_view v) {
  Setup s = prepare(p0, q0, v);
  const RingPtr& ring = s.ring;
  const int n = degree_of(s.p);
  const int m = degree_of(s.q);
  if (n < m) throw Error(ErrorKind::invalid_argument, "subresultant_prs requires deg p >= deg q");

  SubresultantSequence seq;
  seq.main_var = std::string(v);
  seq.p_degree = n;
  seq.q_degree = m;
  std::vector<Dense> by_index(m + 1);

  const int d0 = n - m;
  SparsePoly lc = s.q.back();
  if (d0 >= 1) {
    by_index[m] = scale(s.q, pow_poly(lc, d0 - 1));
  } else {
    by_index[m] = m == 0 ? Dense{SparsePoly(ring, 1)} : s.q;
  }

  // Subresultant PRS recurrence; R holds the regular subresultants and the
  // ps the matching principal coefficients.
  std::vector<Dense> R{s.p, s.q};
  std::vector<SparsePoly> ps{SparsePoly(ring, 1), pow_poly(lc, d0)};
  int d = d0;
  Dense h = prem(s.p, s.q, ring);
  if ((d + 1) % 2 != 0) h = scale(h, SparsePoly(ring, -1));
  SparsePoly c = -pow_poly(lc, d);
  Dense f = s.p;
  Dense g = s.q;
  int mdeg = m;
  while (!is_zero(h)) {
    const int k = degree_of(h);
    R.push_back(h);
    f = g;
    g = h;
    d = mdeg - k;
    mdeg = k;
    SparsePoly b = -(lc * pow_poly(c, d));
    h = divide(prem(f, g, ring), b);
    trim(h);
    lc = g.back();
    if (d > 1) {
      c = divide_or_throw(pow_poly(-lc, d), pow_poly(c, d - 1));
    } else {
      c = -lc;
    }
    ps.push_back(-c);
  }

  for (std::size_t i = 2; i < R.size(); ++i) {
    const int top = degree_of(R[i - 1]) - 1;
    const int k = degree_of(R[i]);
    by_index[top] = R[i];
    if (k < top) {
      const SparsePoly& lr = R[i].back();
      Dense bottom = scale(R[i], ps[i]);
      by_index[k] = divide(bottom, lr);
    }
  }

  seq.entries.reserve(m + 1);
  seq.principal_coeffs.reserve(m + 1);
  for (int j = m; j >= 0; --j) {
    const Dense& e = by_index[j];
    seq.entries.push_back(e.empty() ? SparsePoly(ring) : from_coefficients(ring, s.var, e));
    seq.principal_coeffs.push_back(int(e.size()) > j ? e[j] : SparsePoly(ring));
  }
  return seq;
}

SparsePoly resultant(const SparsePoly& p, const SparsePoly& q, std::string_view v) {
  if (p.is_zero() || q.is_zero()) throw Error(ErrorKind::invalid_argument, "resultant with the zero polynomial");
  RingPtr ring = unify_rings(p.ring(), q.ring());
  if (!ring->index_of(v)) throw Error(ErrorKind::invalid_argument, "variable '" + std::string(v) + "' is not in the ring");
  const int dp = std::max(p.degree(v), 0);
  const int dq = std::max(q.degree(v), 0);
  // resultant(p, q) here is the classical Res(q, p) = (-1)^(dp*dq) Res(p, q).
  if (dp >= dq) {
    SparsePoly s0 = subresultant_prs(p, q, v).entry(0).embed(ring);
    return (dp * dq) % 2 == 0 ? s0 : -s0;
  }
  return subresultant_prs(q, p, v).entry(0).embed(ring);
}

SparsePoly derivative_resultant(const SparsePoly& p, std::string_view v) {
  SparsePoly dp = derivative(p, v);
  if (dp.is_zero()) throw Error(ErrorKind::invalid_argument, "polynomial is constant in " + std::string(v));
  return resultant(p, dp, v);
}

SturmHabichtSequence sturm_habicht(const SparsePoly& p, std::string_view v) {
  const int n = p.degree(v);
  if (n < 1) throw Error(ErrorKind::invalid_argument, "Sturm-Habicht sequence needs positive degree in " + std::string(v));
  SturmHabichtSequence out;
  out.main_var = std::string(v);
  out.degree = n;
  out.p = p;
  SparsePoly dp = derivative(p, v);
  out.polys.push_back(p);
  out.principal.push_back(leading_coefficient(p, v));
  SubresultantSequence seq = subresultant_prs(p, dp, v);
  for (int j = n - 1; j >= 0; --j) {
    const int k = n - j;
    const bool flip = ((k * (k - 1)) / 2) % 2 != 0;
    const SparsePoly& e = seq.entry(j);
    const SparsePoly& pc = seq.principal(j);
    out.polys.push_back(flip ? -e : e);
    out.principal.push_back(flip ? -pc : pc);
  }
  return out;
}

int permanences_minus_variations(const std::vector<int>& signs) {
  int total = 0;
  int last_index = -1;
  int last_sign = 0;
  for (int i = 0; i < int(signs.size()); ++i) {
    const int s = (signs[i] > 0) - (signs[i] < 0);
    if (s == 0) continue;
    if (last_index >= 0) {
      const int gap = i - last_index;
      if (gap % 2 == 1) {
        const int eps = ((gap * (gap - 1)) / 2) % 2 == 0 ? 1 : -1;
        total += eps * last_sign * s;
      }
    }
    last_index = i;
    last_sign = s;
  }
  return total;
}

namespace {

struct SplitPoint {
  std::map<std::string, Rational> rationals;
  const AlgebraicNumber* algebraic = nullptr;
  std::string algebraic_var;
};

SplitPoint split_point(const Point& point, std::string_view main_var) {
  SplitPoint sp;
  for (const auto& [name, value] : point) {
    if (name == main_var) {
      throw Error(ErrorKind::invalid_argument, "the point must not fix the main variable " + name);
    }
    if (const auto* q = std::get_if<Rational>(&value)) {
      sp.rationals[name] = *q;
    } else {
      const auto& a = std::get<AlgebraicNumber>(value);
      if (a.is_exact()) {
        sp.rationals[name] = a.interval().low;
        continue;
      }
      if (sp.algebraic) {
        throw Error(ErrorKind::invalid_argument, "at most one irrational coordinate is supported");
      }
      sp.algebraic = &a;
      sp.algebraic_var = name;
    }
  }
  return sp;
}

int sign_of(const SparsePoly& c, const SplitPoint& sp) {
  SparsePoly s = substitute(c, sp.rationals);
  if (s.is_constant()) return sgn(s.constant_value());
  auto used = s.used_variables();
  if (!sp.algebraic || used.size() != 1 || s.ring()->name(used[0]) != sp.algebraic_var) {
    throw Error(ErrorKind::invalid_argument, "point does not fix every variable of " + c.to_string());
  }
  return sign_at_algebraic(s, *sp.algebraic);
}

int count_split(const SturmHabichtSequence& seq, const SplitPoint& sp) {
  if (sign_of(seq.principal.front(), sp) != 0) {
    std::vector<int> signs;
    signs.reserve(seq.principal.size());
    for (const auto& c : seq.principal) signs.push_back(sign_of(c, sp));
    return permanences_minus_variations(signs);
  }
  // Leading coefficient vanishes at the point: drop the vanishing top
  // coefficients and rebuild the sequence for the truncated polynomial.
  SparsePoly p = substitute(seq.p, sp.rationals);
  std::size_t var = p.ring()->require(seq.main_var);
  auto cs = coefficients(p, var);
  while (!cs.empty() && sign_of(cs.back(), sp) == 0) cs.pop_back();
  if (cs.empty()) {
    throw Error(ErrorKind::degenerate, "polynomial vanishes identically at the point");
  }
  if (cs.size() == 1) return 0;
  SparsePoly t = from_coefficients(p.ring(), var, cs);
  return count_split(sturm_habicht(t, seq.main_var), sp);
}

}  // namespace

int count_real_roots_at(const SturmHabichtSequence& seq, const Point& point) {
  SplitPoint sp = split_point(point, seq.main_var);
  for (std::size_t v : seq.p.used_variables()) {
    const std::string& name = seq.p.ring()->name(v);
    if (name == seq.main_var) continue;
    if (!sp.rationals.count(name) && name != sp.algebraic_var) {
      throw Error(ErrorKind::invalid_argument, "point does not fix variable '" + name + "'");
    }
  }
  return count_split(seq, sp);
}

int count_real_roots(const SparsePoly& p) {
  auto used = p.used_variables();
  if (used.size() > 1) throw Error(ErrorKind::invalid_argument, "expected a univariate polynomial");
  if (used.empty()) {
    if (p.is_zero()) throw Error(ErrorKind::invalid_argument, "zero polynomial has infinitely many roots");
    return 0;
  }
  return count_real_roots_at(sturm_habicht(p, p.ring()->name(used[0])), {});
}

}  // namespace linf
