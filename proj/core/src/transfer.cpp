#include "linf/transfer.hpp"

#include <algorithm>

#include "linf/expr.hpp"
#include "linf/realroots.hpp"

namespace linf {

namespace {

bool is_reserved(std::string_view name) {
  return name == kLaplaceVar || name == kOmegaVar || name == kGammaVar;
}

void check_param_names(const std::vector<std::string>& params) {
  for (const auto& p : params) {
    if (is_reserved(p)) {
      throw Error(ErrorKind::invalid_argument, "'" + p + "' is reserved and cannot be a parameter");
    }
  }
}

std::vector<std::string> used_params(const SparsePoly& p) {
  std::vector<std::string> out;
  for (std::size_t v : p.used_variables()) {
    const auto& name = p.ring()->name(v);
    if (name != kLaplaceVar) out.push_back(name);
  }
  return out;
}

}  // namespace

RationalFunction make_rational_function(SparsePoly num, SparsePoly den) {
  ParsedRational r = make_reduced(std::move(num), std::move(den));
  return {std::move(r.num), std::move(r.den)};
}

RingPtr transfer_ring(const std::vector<std::string>& params) {
  check_param_names(params);
  std::vector<std::string> names = params;
  names.emplace_back(kLaplaceVar);
  return make_ring(std::move(names));
}

RingPtr curve_ring(const std::vector<std::string>& params) {
  check_param_names(params);
  std::vector<std::string> names = params;
  names.emplace_back(kOmegaVar);
  names.emplace_back(kGammaVar);
  return make_ring(std::move(names));
}

TransferMatrix make_transfer(std::vector<std::vector<RationalFunction>> entries) {
  if (entries.empty() || entries.front().empty()) {
    throw Error(ErrorKind::invalid_argument, "transfer matrix has no entries");
  }
  std::vector<std::string> params;
  for (const auto& row : entries) {
    if (row.size() != entries.front().size()) {
      throw Error(ErrorKind::invalid_argument, "transfer matrix rows have different lengths");
    }
    for (const auto& e : row) {
      for (const auto* p : {&e.num, &e.den}) {
        for (auto& name : used_params(*p)) {
          if (std::find(params.begin(), params.end(), name) == params.end()) params.push_back(name);
        }
      }
    }
  }
  std::sort(params.begin(), params.end());
  TransferMatrix g;
  g.rows = entries.size();
  g.cols = entries.front().size();
  g.params = params;
  g.ring = transfer_ring(params);
  for (auto& row : entries) {
    std::vector<RationalFunction> out;
    for (auto& e : row) {
      if (e.den.is_zero()) throw Error(ErrorKind::degenerate, "transfer entry has a zero denominator");
      out.push_back(make_rational_function(e.num.embed(g.ring), e.den.embed(g.ring)));
    }
    g.entries.push_back(std::move(out));
  }
  return g;
}

TransferMatrix parse_transfer(std::string_view text) {
  std::vector<std::string> params;
  for (auto& name : collect_identifiers(text)) {
    if (name == kLaplaceVar) continue;
    if (is_reserved(name)) {
      throw Error(ErrorKind::parse, "'" + name + "' is reserved and cannot appear in a transfer matrix");
    }
    params.push_back(std::move(name));
  }
  std::sort(params.begin(), params.end());
  RingPtr ring = transfer_ring(params);
  auto rows = parse_rational_matrix(text, ring);
  std::vector<std::vector<RationalFunction>> entries;
  for (auto& row : rows) {
    std::vector<RationalFunction> out;
    for (auto& e : row) out.push_back({std::move(e.num), std::move(e.den)});
    entries.push_back(std::move(out));
  }
  TransferMatrix g = make_transfer(std::move(entries));
  // Keep parameters that cancel out of every entry so the user's list is honoured.
  if (g.params != params) {
    TransferMatrix full;
    full.rows = g.rows;
    full.cols = g.cols;
    full.params = params;
    full.ring = ring;
    for (auto& row : g.entries) {
      std::vector<RationalFunction> out;
      for (auto& e : row) out.push_back({e.num.embed(ring), e.den.embed(ring)});
      full.entries.push_back(std::move(out));
    }
    return full;
  }
  return g;
}

TransferMatrix conjugate(const TransferMatrix& g) {
  TransferMatrix out;
  out.rows = g.cols;
  out.cols = g.rows;
  out.params = g.params;
  out.ring = g.ring;
  out.entries.assign(out.rows, std::vector<RationalFunction>(out.cols));
  for (std::size_t i = 0; i < g.rows; ++i) {
    for (std::size_t j = 0; j < g.cols; ++j) {
      const auto& e = g.entries[i][j];
      out.entries[j][i] = make_rational_function(reflect(e.num, kLaplaceVar), reflect(e.den, kLaplaceVar));
    }
  }
  return out;
}

TransferMatrix specialize(const TransferMatrix& g, const std::map<std::string, Rational>& at) {
  TransferMatrix out = g;
  for (auto& row : out.entries) {
    for (auto& e : row) {
      SparsePoly num = substitute(e.num, at);
      SparsePoly den = substitute(e.den, at);
      if (den.is_zero()) {
        throw Error(ErrorKind::degenerate, "a transfer denominator vanishes identically at the parameter point");
      }
      e = make_rational_function(std::move(num), std::move(den));
    }
  }
  return out;
}

SparsePoly bareiss_determinant(std::vector<std::vector<SparsePoly>> m, const RingPtr& ring) {
  const std::size_t n = m.size();
  if (n == 0) return SparsePoly(ring, 1);
  SparsePoly prev(ring, 1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < n && m[r][k].is_zero()) ++r;
      if (r == n) return SparsePoly(ring);
      std::swap(m[k], m[r]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        SparsePoly t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        m[i][j] = t.is_zero() ? t : divide_or_throw(t, prev);
      }
      m[i][k] = SparsePoly(ring);
    }
    prev = m[k][k];
  }
  return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

CurveData curve_from_polynomial(const SparsePoly& n0, const SparsePoly& d0) {
  std::vector<std::string> params;
  for (const auto* p : {&n0, &d0}) {
    for (std::size_t v : p->used_variables()) {
      const auto& name = p->ring()->name(v);
      if (name == kOmegaVar || name == kGammaVar) continue;
      if (name == kLaplaceVar) throw Error(ErrorKind::internal, "curve polynomial still depends on s");
      if (std::find(params.begin(), params.end(), name) == params.end()) params.push_back(name);
    }
  }
  std::sort(params.begin(), params.end());
  CurveData c;
  c.params = params;
  c.ring = curve_ring(params);
  SparsePoly n = n0.embed(c.ring);
  SparsePoly d = d0.embed(c.ring);
  if (d.is_zero()) throw Error(ErrorKind::degenerate, "curve denominator is identically zero");
  if (n.is_zero()) throw Error(ErrorKind::degenerate, "curve numerator is identically zero");
  if (n.depends_on(kOmegaVar) || !d.is_constant()) {
    SparsePoly g = gcd_poly(n, d);
    if (!g.is_constant()) {
      n = divide_or_throw(n, g);
      d = divide_or_throw(d, g);
    }
  }
  // Primitive numerator with positive leading coefficient; the denominator
  // absorbs the same factor so that n/d is unchanged.
  Rational factor = integer_content(n);
  if (n.leading_term_coefficient() < 0) factor = -factor;
  n = n.scaled(Rational(1) / factor);
  d = d.scaled(Rational(1) / factor);
  c.n = n;
  c.d = d;
  c.n_squarefree = squarefree_part(n, kOmegaVar);
  c.lc_omega = leading_coefficient(c.n_squarefree, kOmegaVar);
  return c;
}

CurveData build_curve(const TransferMatrix& g) {
  // Work ring (params..., s, omega, gamma).
  std::vector<std::string> names = g.params;
  names.emplace_back(kLaplaceVar);
  names.emplace_back(kOmegaVar);
  names.emplace_back(kGammaVar);
  RingPtr work = make_ring(names);

  TransferMatrix gt = conjugate(g);
  const std::size_t v = g.cols;
  // Phi = gamma^2 I - G~ G as numerator/denominator pairs.
  std::vector<std::vector<RationalFunction>> phi(v, std::vector<RationalFunction>(v));
  SparsePoly gamma2 = pow(SparsePoly::variable(work, kGammaVar), 2);
  for (std::size_t i = 0; i < v; ++i) {
    for (std::size_t j = 0; j < v; ++j) {
      SparsePoly num(work);
      SparsePoly den(work, 1);
      for (std::size_t k = 0; k < g.rows; ++k) {
        const auto& a = gt.entries[i][k];
        const auto& b = g.entries[k][j];
        SparsePoly tn = (a.num * b.num).embed(work);
        SparsePoly td = (a.den * b.den).embed(work);
        if (tn.is_zero()) continue;
        SparsePoly l = lcm_poly(den, td);
        SparsePoly lhs = divide_or_throw(l, den);
        SparsePoly rhs = divide_or_throw(l, td);
        num = num * lhs + tn * rhs;
        den = l;
      }
      num = -num;
      if (i == j) num += gamma2 * den;
      ParsedRational r = make_reduced(num, den);
      phi[i][j] = {std::move(r.num), std::move(r.den)};
    }
  }
  // Clear denominators row by row, then take a polynomial determinant.
  SparsePoly den_total(work, 1);
  std::vector<std::vector<SparsePoly>> m(v, std::vector<SparsePoly>(v, SparsePoly(work)));
  for (std::size_t i = 0; i < v; ++i) {
    SparsePoly l(work, 1);
    for (std::size_t j = 0; j < v; ++j) l = lcm_poly(l, phi[i][j].den);
    for (std::size_t j = 0; j < v; ++j) {
      m[i][j] = phi[i][j].num * divide_or_throw(l, phi[i][j].den);
    }
    den_total *= l;
  }
  SparsePoly det = bareiss_determinant(std::move(m), work);
  ParsedRational reduced = make_reduced(det, den_total);

  SparsePoly minus_omega2 = -pow(SparsePoly::variable(work, kOmegaVar), 2);
  auto to_omega = [&](const SparsePoly& p, const char* what) {
    try {
      return substitute_square(p, kLaplaceVar, minus_omega2);
    } catch (const Error&) {
      throw Error(ErrorKind::internal, std::string("odd power of s in the ") + what +
                                           " of det(gamma^2 I - G~ G)");
    }
  };
  SparsePoly n = to_omega(reduced.num, "numerator");
  SparsePoly d = to_omega(reduced.den, "denominator");

  CurveData c = curve_from_polynomial(n, d);
  if (c.params != g.params) {
    // Keep the matrix parameter list even when some parameter drops out.
    CurveData full;
    full.params = g.params;
    full.ring = curve_ring(g.params);
    full.n = c.n.embed(full.ring);
    full.d = c.d.embed(full.ring);
    full.n_squarefree = c.n_squarefree.embed(full.ring);
    full.lc_omega = c.lc_omega.embed(full.ring);
    c = std::move(full);
  }
  c.source = g;
  return c;
}

bool check_rl_infinity(const TransferMatrix& g, const std::map<std::string, Rational>& at) {
  for (const auto& p : g.params) {
    if (!at.count(p)) throw Error(ErrorKind::invalid_argument, "parameter '" + p + "' is not fixed");
  }
  TransferMatrix s = specialize(g, at);
  RingPtr omega_ring = make_ring({std::string(kLaplaceVar), std::string(kOmegaVar)});
  SparsePoly minus_omega2 = -pow(SparsePoly::variable(omega_ring, kOmegaVar), 2);
  for (const auto& row : s.entries) {
    for (const auto& e : row) {
      if (e.num.is_zero()) continue;
      if (e.num.degree(kLaplaceVar) > e.den.degree(kLaplaceVar)) return false;
      if (e.den.is_constant()) continue;
      // D(s) D(-s) at s = i omega equals |D(i omega)|^2.
      SparsePoly dd = (e.den * reflect(e.den, kLaplaceVar)).embed(omega_ring);
      SparsePoly on_axis = substitute_square(dd, kLaplaceVar, minus_omega2);
      if (!isolate(on_axis).empty()) return false;
    }
  }
  return true;
}

}  // namespace linf
