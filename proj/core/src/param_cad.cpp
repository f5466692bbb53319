#include "linf/param_cad.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <set>
#include <thread>

#include "linf/expr.hpp"
#include "linf/subres.hpp"

namespace linf {

std::string_view to_string(Relation rel) {
  switch (rel) {
    case Relation::gt: return ">";
    case Relation::lt: return "<";
    case Relation::ge: return ">=";
    case Relation::le: return "<=";
    case Relation::ne: return "!=";
    case Relation::eq: return "=";
  }
  return "?";
}

std::string_view to_string(CellStatus status) {
  switch (status) {
    case CellStatus::ok: return "ok";
    case CellStatus::invalid_at_sample: return "invalid_at_sample";
    case CellStatus::not_well_behaved: return "not_well_behaved";
  }
  return "unknown";
}

namespace {

struct OperatorToken {
  std::size_t pos;
  std::size_t len;
  Relation rel;
};

std::vector<OperatorToken> find_operators(std::string_view s) {
  std::vector<OperatorToken> out;
  for (std::size_t i = 0; i < s.size();) {
    auto two = s.substr(i, 2);
    if (two == "<=" || two == ">=" || two == "!=" || two == "==") {
      Relation rel = two == "<=" ? Relation::le : two == ">=" ? Relation::ge : two == "!=" ? Relation::ne : Relation::eq;
      out.push_back({i, 2, rel});
      i += 2;
    } else if (s.substr(i, 3) == "\xE2\x89\xA0") {
      out.push_back({i, 3, Relation::ne});
      i += 3;
    } else if (s.substr(i, 3) == "\xE2\x89\xA4" || s.substr(i, 3) == "\xE2\x89\xA5") {
      out.push_back({i, 3, s[i + 2] == '\xA4' ? Relation::le : Relation::ge});
      i += 3;
    } else if (s[i] == '<' || s[i] == '>' || s[i] == '=') {
      out.push_back({i, 1, s[i] == '<' ? Relation::lt : s[i] == '>' ? Relation::gt : Relation::eq});
      i += 1;
    } else {
      ++i;
    }
  }
  return out;
}

// Sign of num/den equals sign of num*den, so a rational side becomes one polynomial.
SparsePoly difference_poly(std::string_view lhs, std::string_view rhs, const RingPtr& ring,
                           std::size_t offset, std::size_t rhs_offset) {
  auto parse_side = [&](std::string_view side, std::size_t at) {
    try {
      return parse_rational_expression(side, ring);
    } catch (const ParseError& e) {
      std::string msg = e.what();
      msg = msg.substr(0, msg.rfind(" at position "));
      throw ParseError(msg, at + e.position());
    }
  };
  ParsedRational a = parse_side(lhs, offset);
  ParsedRational b = parse_side(rhs, rhs_offset);
  SparsePoly num = a.num * b.den - b.num * a.den;
  SparsePoly den = a.den * b.den;
  if (den.is_constant()) return num.scaled(den.constant_value() > 0 ? Rational(1) : Rational(-1));
  return num * den;
}

template <class Fn>
void for_each_part(std::string_view text, Fn&& fn) {
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    char ch = i < text.size() ? text[i] : ',';
    if (ch == '(' || ch == '[') ++depth;
    if (ch == ')' || ch == ']') --depth;
    if (depth == 0 && (ch == ',' || ch == ';' || ch == '\n')) {
      fn(text.substr(start, i - start), start);
      start = i + 1;
    }
  }
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

SemiAlgebraicConstraints parse_constraints(std::string_view text, const RingPtr& ring) {
  SemiAlgebraicConstraints out;
  for_each_part(text, [&](std::string_view part, std::size_t offset) {
    if (blank(part)) return;
    auto ops = find_operators(part);
    if (ops.empty()) throw ParseError("constraint without a comparison operator", offset);
    std::size_t prev = 0;
    for (std::size_t k = 0; k < ops.size(); ++k) {
      std::size_t next = k + 1 < ops.size() ? ops[k + 1].pos : part.size();
      std::string_view lhs = part.substr(prev, ops[k].pos - prev);
      std::size_t rhs_start = ops[k].pos + ops[k].len;
      std::string_view rhs = part.substr(rhs_start, next - rhs_start);
      if (blank(lhs) || blank(rhs)) throw ParseError("missing operand", offset + ops[k].pos);
      out.push_back({difference_poly(lhs, rhs, ring, offset + prev, offset + rhs_start), ops[k].rel});
      prev = rhs_start;
    }
  });
  return out;
}

namespace {

bool holds(int sign, Relation rel) {
  switch (rel) {
    case Relation::gt: return sign > 0;
    case Relation::lt: return sign < 0;
    case Relation::ge: return sign >= 0;
    case Relation::le: return sign <= 0;
    case Relation::ne: return sign != 0;
    case Relation::eq: return sign == 0;
  }
  return false;
}

bool fixes_all(const SparsePoly& p, const std::map<std::string, Rational>& point) {
  for (auto v : p.used_variables()) {
    if (!point.count(p.ring()->name(v))) return false;
  }
  return true;
}

void append_split(std::vector<SparsePoly>& out, const SparsePoly& p) {
  if (p.is_zero() || p.is_constant()) return;
  for (auto& f : content_split(p)) out.push_back(std::move(f));
}

std::vector<SparsePoly> nonconstant_basis(const std::vector<SparsePoly>& polys) {
  std::vector<SparsePoly> out;
  for (auto& f : coprime_basis(polys)) {
    if (!f.is_constant()) out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

bool satisfies(const SemiAlgebraicConstraints& sp, const std::map<std::string, Rational>& point) {
  for (const auto& c : sp) {
    if (!fixes_all(c.poly, point)) continue;
    if (!holds(sign_at_point(c.poly, point), c.rel)) return false;
  }
  return true;
}

DiscriminantVarietySet discriminant_variety(const SparsePoly& r, const SemiAlgebraicConstraints& sp,
                                            std::string_view main_var) {
  if (r.is_zero()) throw Error(ErrorKind::not_well_behaved, "critical resultant vanishes identically");
  for (const auto& c : sp) {
    if (c.rel == Relation::eq) {
      throw Error(ErrorKind::unsupported_constraint,
                  "equality constraint " + c.poly.to_string() + " = 0 has no open cells");
    }
  }
  std::vector<SparsePoly> pieces;
  if (r.depends_on(main_var)) {
    append_split(pieces, content_in(r, main_var));
    auto sq = squarefree_decomposition(r, main_var);
    for (std::size_t i = 0; i < sq.size(); ++i) {
      const SparsePoly& a = sq[i].factor;
      if (a.degree(main_var) < 1) {
        append_split(pieces, a);
        continue;
      }
      append_split(pieces, leading_coefficient(a, main_var));
      if (a.degree(main_var) >= 2) append_split(pieces, resultant(a, derivative(a, main_var), main_var));
      for (std::size_t j = i + 1; j < sq.size(); ++j) {
        if (sq[j].factor.degree(main_var) < 1) continue;
        append_split(pieces, resultant(a, sq[j].factor, main_var));
      }
    }
  } else {
    append_split(pieces, r);
  }
  for (const auto& c : sp) append_split(pieces, c.poly);
  for (const auto& p : pieces) {
    if (p.depends_on(main_var)) throw Error(ErrorKind::internal, "projection kept " + std::string(main_var));
  }
  return {nonconstant_basis(pieces)};
}

std::map<std::string, Rational> CadResult::sample_map(const Cell& cell) const {
  std::map<std::string, Rational> out;
  for (std::size_t k = 0; k < order.size(); ++k) out[order[k]] = cell.sample.at(k);
  return out;
}

std::vector<std::string> default_order(const std::vector<SparsePoly>& polys,
                                       const std::vector<std::string>& vars) {
  std::vector<std::pair<int, std::size_t>> keyed;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    int deg = 0;
    for (const auto& p : polys) deg = std::max(deg, p.is_zero() ? 0 : p.degree(vars[i]));
    keyed.push_back({deg, i});
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second > b.second;
  });
  std::vector<std::string> out;
  for (const auto& [deg, i] : keyed) out.push_back(vars[i]);
  return out;
}

namespace {

struct LevelRoot {
  AlgebraicNumber value;
  std::size_t poly;
  int index;  // 1-based among the roots of that polynomial
};

using PrefixMap = std::map<std::string, Rational>;

// Distinct real roots of the level polynomials at a rational prefix, ascending.
std::vector<LevelRoot> level_roots(const std::vector<SparsePoly>& polys, const PrefixMap& prefix) {
  std::vector<LevelRoot> out;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    SparsePoly f = substitute(polys[i], prefix);
    if (f.is_zero()) throw Error(ErrorKind::boundary, "projection polynomial vanishes identically over the point");
    if (f.is_constant()) continue;
    auto roots = isolate(f);
    for (std::size_t k = 0; k < roots.size(); ++k) {
      auto it = out.begin();
      bool fused = false;
      for (; it != out.end(); ++it) {
        auto cmp = compare(roots[k], it->value);
        if (cmp == std::strong_ordering::equal) {
          fused = true;
          break;
        }
        if (cmp == std::strong_ordering::less) break;
      }
      if (!fused) out.insert(it, LevelRoot{roots[k], i, int(k) + 1});
    }
  }
  return out;
}

// Refines a < b until a's interval ends strictly below b's.
void separate(AlgebraicNumber& a, AlgebraicNumber& b) {
  while (!(a.interval().high < b.interval().low)) {
    if (!a.is_exact()) a = refine(a, a.interval().width() / 2);
    if (!b.is_exact()) b = refine(b, b.interval().width() / 2);
  }
}

// Simplest dyadic strictly inside (lo, hi): smallest power-of-two denominator,
// then closest to the middle.
Rational simplest_dyadic(const Rational& lo, const Rational& hi) {
  Integer den = 1;
  Rational mid = (lo + hi) / 2;
  for (;;) {
    mpz_class first;
    Rational scaled = lo * den;
    mpz_fdiv_q(first.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    first += 1;
    if (Rational(first, den) < hi) {
      Rational best(first, den);
      Rational ms = mid * den;
      mpz_class near;
      mpz_fdiv_q(near.get_mpz_t(), ms.get_num_mpz_t(), ms.get_den_mpz_t());
      for (mpz_class m : {mpz_class(near), mpz_class(near + 1)}) {
        Rational q(m, den);
        q.canonicalize();
        if (q > lo && q < hi && abs(q - mid) < abs(best - mid)) best = q;
      }
      best.canonicalize();
      return best;
    }
    den *= 2;
  }
}

Rational root_bound(const std::vector<LevelRoot>& roots) {
  Rational b = 0;
  for (const auto& r : roots) {
    b = std::max<Rational>(b, abs(r.value.interval().low));
    b = std::max<Rational>(b, abs(r.value.interval().high));
  }
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
  return Rational(c + 1);
}

// Bounds (lo, hi) strictly inside gap `gap` (0..count), usable for sampling.
std::pair<Rational, Rational> gap_bounds(std::vector<LevelRoot>& roots, std::size_t gap) {
  if (roots.empty()) return {Rational(-1), Rational(1)};
  Rational bound = root_bound(roots);
  if (gap == 0) return {-bound - 1, roots.front().value.interval().low};
  if (gap == roots.size()) return {roots.back().value.interval().high, bound + 1};
  separate(roots[gap - 1].value, roots[gap].value);
  return {roots[gap - 1].value.interval().high, roots[gap].value.interval().low};
}

Rational gap_sample(std::vector<LevelRoot>& roots, std::size_t gap) {
  if (roots.empty()) return 0;
  if (gap == 0) return -root_bound(roots);
  if (gap == roots.size()) return root_bound(roots);
  separate(roots[gap - 1].value, roots[gap].value);
  return simplest_dyadic(roots[gap - 1].value.interval().high, roots[gap].value.interval().low);
}

int top_level(const SparsePoly& p, const std::vector<std::size_t>& level_of_var) {
  int top = -1;
  for (auto v : p.used_variables()) top = std::max(top, int(level_of_var.at(v)));
  return top;
}

std::string bound_text(const SparsePoly& f, const std::string& var, int index) {
  if (f.degree(var) == 1) {
    SparsePoly c1 = coefficient(f, var, 1);
    SparsePoly c0 = coefficient(f, var, 0);
    if (c1.is_constant()) return (-c0).scaled(1 / c1.constant_value()).to_string();
    return "(" + (-c0).to_string() + ")/(" + c1.to_string() + ")";
  }
  return "root_" + std::to_string(index) + "(" + f.to_string() + ")";
}

struct Lifter {
  const std::vector<std::string>& order;
  const std::vector<std::vector<SparsePoly>>& levels;
  const std::vector<std::vector<const Constraint*>>& checks;
  const std::vector<SparsePoly>& factors;
  std::vector<Cell>& cells;

  void lift(std::size_t k, PrefixMap& prefix, Cell& partial, std::vector<std::string>& text) {
    if (k == order.size()) {
      Cell cell = partial;
      for (const auto& f : factors) cell.sign_vector.push_back(sign_at_point(f, prefix));
      std::string desc;
      for (const auto& t : text) {
        if (t.empty()) continue;
        if (!desc.empty()) desc += " and ";
        desc += t;
      }
      cell.description = desc.empty() ? "everywhere" : desc;
      cells.push_back(std::move(cell));
      return;
    }
    std::vector<LevelRoot> roots = level_roots(levels[k], prefix);
    for (std::size_t gap = 0; gap <= roots.size(); ++gap) {
      Rational x = gap_sample(roots, gap);
      prefix[order[k]] = x;
      bool ok = true;
      for (const Constraint* c : checks[k]) ok = ok && holds(sign_at_point(c->poly, prefix), c->rel);
      if (ok) {
        partial.sample.push_back(x);
        partial.stack.push_back({int(gap), int(gap) + 1});
        std::string lo = gap > 0 ? bound_text(levels[k][roots[gap - 1].poly], order[k], roots[gap - 1].index) : "";
        std::string hi =
            gap < roots.size() ? bound_text(levels[k][roots[gap].poly], order[k], roots[gap].index) : "";
        std::string t = !lo.empty() && !hi.empty() ? lo + " < " + order[k] + " < " + hi
                        : !lo.empty()              ? order[k] + " > " + lo
                        : !hi.empty()              ? order[k] + " < " + hi
                                                   : "";
        text.push_back(t);
        lift(k + 1, prefix, partial, text);
        text.pop_back();
        partial.sample.pop_back();
        partial.stack.pop_back();
      }
      prefix.erase(order[k]);
    }
  }
};

}  // namespace

CadResult open_cad(const DiscriminantVarietySet& factors, const SemiAlgebraicConstraints& sp,
                   const std::vector<std::string>& order) {
  if (order.size() > kMaxCadDimension) {
    throw Error(ErrorKind::unsupported_dimension, "open CAD supports at most " +
                                                      std::to_string(kMaxCadDimension) + " parameters, got " +
                                                      std::to_string(order.size()));
  }
  std::set<std::string> seen(order.begin(), order.end());
  if (seen.size() != order.size()) throw Error(ErrorKind::invalid_argument, "variable order has duplicates");

  CadResult out;
  out.order = order;
  out.factors = factors;
  out.levels.assign(order.size(), {});

  std::vector<SparsePoly> all = factors.factors;
  for (const auto& c : sp) append_split(all, c.poly);
  if (all.empty() && order.empty()) {
    out.cells.push_back(Cell{{}, {}, {}, "everywhere"});
    return out;
  }
  RingPtr ring = all.empty() ? make_ring(order) : all.front().ring();
  for (const auto& p : all) ring = unify_rings(ring, p.ring());
  for (auto& p : all) p = p.embed(ring);

  std::vector<std::size_t> level_of_var(ring->size(), std::size_t(-1));
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto idx = ring->index_of(order[k]);
    if (idx) level_of_var[*idx] = k;
  }
  auto level_of = [&](const SparsePoly& p) {
    for (auto v : p.used_variables()) {
      if (level_of_var[v] == std::size_t(-1)) {
        throw Error(ErrorKind::invalid_argument,
                    "polynomial " + p.to_string() + " uses a variable outside the decomposition order");
      }
    }
    return top_level(p, level_of_var);
  };

  std::vector<SparsePoly> current = nonconstant_basis(all);
  for (int k = int(order.size()) - 1; k >= 0; --k) {
    std::vector<SparsePoly> lower;
    std::vector<SparsePoly>& here = out.levels[k];
    for (auto& p : current) {
      int lv = level_of(p);
      if (lv == k) here.push_back(p);
      else if (lv >= 0 && lv < k) lower.push_back(p);
    }
    if (k == 0) break;
    const std::string& x = order[k];
    std::vector<SparsePoly> proj = lower;
    for (std::size_t i = 0; i < here.size(); ++i) {
      const SparsePoly& f = here[i];
      append_split(proj, leading_coefficient(f, x));
      if (f.degree(x) >= 2) append_split(proj, resultant(f, derivative(f, x), x));
      for (std::size_t j = i + 1; j < here.size(); ++j) append_split(proj, resultant(f, here[j], x));
    }
    current = nonconstant_basis(proj);
  }

  std::vector<std::vector<const Constraint*>> checks(order.size());
  for (const auto& c : sp) {
    if (c.poly.is_constant()) {
      if (!holds(c.poly.is_zero() ? 0 : sgn(c.poly.constant_value()), c.rel)) return out;
      continue;
    }
    checks[level_of(c.poly.embed(ring))].push_back(&c);
  }

  PrefixMap prefix;
  Cell partial;
  std::vector<std::string> text;
  Lifter lifter{out.order, out.levels, checks, out.factors.factors, out.cells};
  lifter.lift(0, prefix, partial, text);
  return out;
}

const Cell& locate_cell(const CadResult& cad, const std::vector<Rational>& point) {
  if (point.size() != cad.order.size()) {
    throw Error(ErrorKind::invalid_argument, "point has " + std::to_string(point.size()) +
                                                 " coordinates, expected " + std::to_string(cad.order.size()));
  }
  PrefixMap prefix;
  std::vector<std::pair<int, int>> stack;
  for (std::size_t k = 0; k < cad.order.size(); ++k) {
    auto roots = level_roots(cad.levels[k], prefix);
    int gap = 0;
    for (const auto& r : roots) {
      auto cmp = compare(r.value, point[k]);
      if (cmp == std::strong_ordering::equal) {
        throw Error(ErrorKind::boundary, "point lies on the cell boundary " + cad.levels[k][r.poly].to_string() +
                                             " = 0; perturb the parameters");
      }
      if (cmp == std::strong_ordering::less) ++gap;
    }
    stack.push_back({gap, gap + 1});
    prefix[cad.order[k]] = point[k];
  }
  for (const auto& cell : cad.cells) {
    if (cell.stack == stack) return cell;
  }
  throw Error(ErrorKind::invalid_argument, "point does not satisfy the parameter constraints");
}

std::vector<Rational> sample_in_cell(const CadResult& cad, const Cell& cell, std::mt19937_64& rng) {
  PrefixMap prefix;
  std::vector<Rational> out;
  std::uniform_int_distribution<long> draw(1, (1L << 20) - 1);
  for (std::size_t k = 0; k < cad.order.size(); ++k) {
    auto roots = level_roots(cad.levels[k], prefix);
    std::size_t gap = std::size_t(cell.stack.at(k).first);
    if (gap > roots.size()) throw Error(ErrorKind::internal, "cell stack does not match the decomposition");
    // Tighten the bracketing roots so the sampled span covers most of the gap.
    if (gap > 0 && gap < roots.size()) {
      separate(roots[gap - 1].value, roots[gap].value);
      Rational span = roots[gap].value.interval().low - roots[gap - 1].value.interval().high;
      roots[gap - 1].value = refine(roots[gap - 1].value, span / 64);
      roots[gap].value = refine(roots[gap].value, span / 64);
    }
    auto [lo, hi] = gap_bounds(roots, gap);
    Rational t(draw(rng), 1L << 20);
    t.canonicalize();
    Rational x = lo + t * (hi - lo);
    x.canonicalize();
    out.push_back(x);
    prefix[cad.order[k]] = x;
  }
  return out;
}

CellIndexPair solve_at(const CurveData& c, const Cell& cell, const std::map<std::string, Rational>& point,
                       const NormOptions& options) {
  CellIndexPair out;
  out.cell = cell;
  try {
    if (c.source && !check_rl_infinity(*c.source, point)) {
      out.status = CellStatus::invalid_at_sample;
      out.message = "transfer matrix is improper or has a pole on the imaginary axis at the sample";
      return out;
    }
    out.norm = linf_norm(c, point, options);
    out.index = out.norm->index;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::not_well_behaved && e.kind() != ErrorKind::degenerate) throw;
    out.status = CellStatus::not_well_behaved;
    out.message = e.what();
  }
  return out;
}

Algorithm1Result algorithm1(const CurveData& c, const SemiAlgebraicConstraints& sp,
                            const Algorithm1Options& options) {
  for (const auto& con : sp) {
    for (auto v : con.poly.used_variables()) {
      const std::string& name = con.poly.ring()->name(v);
      if (std::find(c.params.begin(), c.params.end(), name) == c.params.end()) {
        throw Error(ErrorKind::invalid_argument, "constraint uses '" + name + "', which is not a parameter");
      }
    }
  }
  if (c.params.size() > kMaxCadDimension) {
    throw Error(ErrorKind::unsupported_dimension, "at most " + std::to_string(kMaxCadDimension) +
                                                      " parameters are supported, got " +
                                                      std::to_string(c.params.size()));
  }
  Algorithm1Result out;
  out.r_poly = critical_resultant(c);
  DiscriminantVarietySet dv = discriminant_variety(out.r_poly, sp);

  std::vector<std::string> order = options.order;
  if (order.empty()) {
    std::vector<SparsePoly> polys = dv.factors;
    for (const auto& con : sp) polys.push_back(con.poly);
    order = default_order(polys, c.params);
  } else {
    std::vector<std::string> a = order, b = c.params;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw Error(ErrorKind::invalid_argument, "variable order must list every parameter exactly once");
  }
  out.cad = open_cad(dv, sp, order);

  const auto& cells = out.cad.cells;
  out.pairs.resize(cells.size());
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, unsigned(std::max<std::size_t>(1, cells.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(cells.size());
  auto work = [&] {
    for (std::size_t i; (i = next++) < cells.size();) {
      try {
        out.pairs[i] = solve_at(c, cells[i], out.cad.sample_map(cells[i]), options.norm);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace linf
