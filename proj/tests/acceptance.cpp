// Standalone acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "linf/param_cad.hpp"
#include "linf/subres.hpp"
#include "test_util.hpp"

using namespace linf;

namespace {

const char* kRatio = "((s/w0)^2+2*xi*(s/w0)+1)/((s/(r*w0))^2+2*xi*(s/(r*w0))+1)";
const char* kRatioConstraints = "w0 > 0, 0 < xi <= 1, r > 0, r != 1";

struct Verdict {
  bool pass = true;
  std::string detail;
};

Rational q(const char* text) { return parse_rational(text); }

bool equals(const AlgebraicNumber& a, const Rational& b) { return compare(a, b) == std::strong_ordering::equal; }

const CurveData& ratio_curve() {
  static const CurveData c = build_curve(parse_transfer(kRatio));
  return c;
}

std::string join(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

Verdict a1_cells() {
  auto start = std::chrono::steady_clock::now();
  const auto& c = ratio_curve();
  auto res = algorithm1(c, parse_constraints(kRatioConstraints, c.ring));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Verdict v;
  std::vector<int> idx;
  SparsePoly xi_split = parse_polynomial("2*xi^2 - 1", c.ring);
  SparsePoly r_split = parse_polynomial("r - 1", c.ring);
  SparsePoly w0 = parse_polynomial("w0", c.ring);
  const int xi_sign[] = {-1, -1, 1, 1};
  const int r_sign[] = {-1, 1, -1, 1};
  if (res.pairs.size() != 4) {
    v.pass = false;
  } else {
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& p = res.pairs[i];
      auto at = res.cad.sample_map(p.cell);
      idx.push_back(p.index ? *p.index : -1);
      if (p.status != CellStatus::ok || sign_at_point(xi_split, at) != xi_sign[i] ||
          sign_at_point(r_split, at) != r_sign[i] || sign_at_point(w0, at) != 1) {
        v.pass = false;
      }
    }
  }
  v.pass = v.pass && idx == std::vector<int>{8, 8, 7, 7} && secs < 60;
  std::ostringstream os;
  os << res.pairs.size() << " cells, indices (" << join(idx) << "), " << secs << " s";
  v.detail = os.str();
  return v;
}

Verdict a2_samples() {
  const auto& c = ratio_curve();
  NormOptions opt;
  opt.precision = Rational(1) / Rational(Integer(1) << 70);
  Rational xi1 = q("25476206690102465/72057594037927936");
  Rational xi3 = q("30752501854533959/36028797018963968");
  auto at = [&](const Rational& xi, const Rational& r) {
    return linf_norm(c, {{"xi", xi}, {"r", r}, {"w0", 1}}, opt).gamma_max;
  };
  auto overlaps = [](const AlgebraicNumber& a, const Rational& lo, const Rational& hi) {
    return a.interval().low <= hi && lo <= a.interval().high;
  };
  Verdict v;
  bool s1 = overlaps(at(xi1, Rational(1, 2)), q("6100687164736347533/4611686018427387904"),
                     q("24402748658945394263/18446744073709551616"));
  bool s2 = overlaps(at(xi1, 2), q("6100687164736347533/1152921504606846976"),
                     q("24402748658945394263/4611686018427387904"));
  auto g3 = at(xi3, Rational(1, 2));
  auto g4 = at(xi3, 2);
  bool s3 = equals(g3, 1) && g3.is_exact();
  bool s4 = equals(g4, 4) && g4.is_exact();
  v.pass = s1 && s2 && s3 && s4;
  v.detail = std::string("sample1 ") + (s1 ? "overlaps" : "misses") + ", sample2 " + (s2 ? "overlaps" : "misses") +
             ", sample3 " + (s3 ? "= 1" : "!= 1") + ", sample4 " + (s4 ? "= 4" : "!= 4");
  return v;
}

Rational random_rational(std::mt19937_64& rng, const Rational& lo, const Rational& hi) {
  std::uniform_int_distribution<long> draw(1, (1L << 24) - 1);
  Rational t(draw(rng), 1L << 24);
  t.canonicalize();
  Rational x = lo + t * (hi - lo);
  x.canonicalize();
  return x;
}

Verdict a3_closed_form() {
  const auto& c = ratio_curve();
  std::mt19937_64 rng(2024);
  RingPtr gring = make_ring({"gamma"});
  Verdict v;
  int checked = 0;
  struct Region {
    bool low_damping;
    bool r_small;
  };
  for (Region region : {Region{true, true}, Region{true, false}, Region{false, true}, Region{false, false}}) {
    for (int k = 0; k < 20; ++k) {
      Rational xi;
      do {
        xi = random_rational(rng, 0, 1);
      } while ((2 * xi * xi < 1) != region.low_damping);
      Rational r = region.r_small ? random_rational(rng, 0, 1) : random_rational(rng, 1, 5);
      Rational w0 = random_rational(rng, Rational(1, 10), 10);
      auto g = linf_norm(c, {{"xi", xi}, {"r", r}, {"w0", w0}}).gamma_max;
      Rational bound = std::max<Rational>(1, r * r);
      bool ok;
      if (!region.low_damping) {
        ok = equals(g, bound);
      } else {
        Rational mu = 4 * xi * xi * (xi * xi - 1);
        Rational b = (r * r - 1) * (r * r - 1) - 2 * mu * r * r;
        SparsePoly gm = SparsePoly::variable(gring, "gamma");
        SparsePoly m = pow(gm, 4).scaled(mu) + pow(gm, 2).scaled(b) + SparsePoly(gring, mu * r * r * r * r);
        // delta is the largest real root of M.
        auto roots = isolate(m);
        ok = sign_at_algebraic(m, g) == 0 && compare(g, bound) == std::strong_ordering::greater && !roots.empty() &&
             compare(roots.back(), g) == std::strong_ordering::equal;
      }
      if (!ok) {
        v.pass = false;
        v.detail = "mismatch at xi=" + to_string(xi) + " r=" + to_string(r) + " w0=" + to_string(w0);
        return v;
      }
      ++checked;
    }
  }
  v.detail = std::to_string(checked) + " points in 4 regions";
  return v;
}

Verdict a4_parabola() {
  auto ring = make_ring({"a", "b", "x"});
  DiscriminantVarietySet dv{{parse_polynomial("a^2 - 4*b", ring)}};
  auto cad = open_cad(dv, {}, {"b", "a"});
  std::vector<int> counts;
  SparsePoly f = parse_polynomial("x^2 + a*x + b", ring);
  for (const auto& cell : cad.cells) counts.push_back(count_real_roots(substitute(f, cad.sample_map(cell))));
  std::vector<int> sorted = counts;
  std::sort(sorted.begin(), sorted.end());
  Verdict v;
  // The rootless cell is the one bounded by both branches of the parabola.
  bool inner_empty = counts.size() == 4 && counts[2] == 0 && cad.cells[2].stack.back() == std::pair<int, int>{1, 2};
  v.pass = cad.cells.size() == 4 && sorted == std::vector<int>{0, 2, 2, 2} && inner_empty;
  v.detail = std::to_string(cad.cells.size()) + " cells, counts in stack order (" + join(counts) +
             "), rootless cell between the parabola branches";
  return v;
}

Verdict a5_resultants() {
  auto start = std::chrono::steady_clock::now();
  auto ring = make_ring({"x", "y"});
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<int> terms(2, 10);
  Verdict v;
  int n = 0;
  while (n < 200) {
    auto p = testing::random_poly(rng, ring, 6, terms(rng), 31);
    auto qq = testing::random_poly(rng, ring, 6, terms(rng), 31);
    if (p.degree("x") < 1 || qq.degree("x") < 1) continue;
    auto got = resultant(p, qq, "x");
    auto want = testing::sylvester_resultant(qq, p, 0, ring);
    if (got != want) {
      v.pass = false;
      v.detail = "mismatch for " + p.to_string() + " and " + qq.to_string();
      return v;
    }
    ++n;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.pass = secs < 30;
  v.detail = std::to_string(n) + " pairs, " + std::to_string(secs) + " s";
  return v;
}

Verdict a6_root_counts() {
  auto ring = make_ring({"x"});
  std::mt19937_64 rng(66);
  std::uniform_int_distribution<int> deg(1, 12);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<int> small(-6, 6);
  SparsePoly x = SparsePoly::variable(ring, "x");
  Verdict v;
  for (int i = 0; i < 200; ++i) {
    SparsePoly f;
    int d = deg(rng);
    if (kind(rng) == 0) {
      // Products of rational linear factors, with repeats, exercise multiple roots.
      f = SparsePoly(ring, 1);
      for (int k = 0; k < d; ++k) f *= x.scaled(std::abs(small(rng)) + 1) - SparsePoly(ring, small(rng));
    } else {
      f = testing::random_univariate(rng, ring, d, 20);
    }
    int sh = count_real_roots(f);
    int iso = int(isolate(f).size());
    if (sh != iso) {
      v.pass = false;
      v.detail = "count " + std::to_string(sh) + " vs " + std::to_string(iso) + " for " + f.to_string();
      return v;
    }
  }
  v.detail = "200 polynomials";
  return v;
}

std::vector<TransferMatrix> stable_systems() {
  std::mt19937_64 rng(77);
  std::vector<TransferMatrix> out;
  for (int i = 0; i < 25; ++i) out.push_back(testing::random_stable_scalar(rng, 4));
  return out;
}

Verdict a7_grid() {
  auto start = std::chrono::steady_clock::now();
  Verdict v;
  double worst = 0;
  for (const auto& g : stable_systems()) {
    double gmax = linf_norm(g).gamma_max.to_double();
    double grid = std::max(testing::sigma_max(g, 0), testing::sigma_max(g, 1e12));
    const int points = 100000;
    for (int i = 0; i < points; ++i) {
      grid = std::max(grid, testing::sigma_max(g, std::pow(10.0, -4 + 8.0 * i / (points - 1))));
    }
    worst = std::max(worst, (gmax - grid) / (1 + gmax));
    if (grid > gmax + 1e-9 || grid < gmax - 1e-6 * (1 + gmax)) {
      v.pass = false;
      std::ostringstream os;
      os.precision(15);
      os << "grid " << grid << " vs exact " << gmax << " for (" << g.at(0, 0).num.to_string() << ")/("
         << g.at(0, 0).den.to_string() << ")";
      v.detail = os.str();
      return v;
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.pass = secs < 60;
  std::ostringstream os;
  os << "25 systems, worst relative undershoot " << worst << ", " << secs << " s";
  v.detail = os.str();
  return v;
}

Verdict a8_bound() {
  std::mt19937_64 rng(88);
  std::uniform_int_distribution<int> num(0, 4000);
  std::uniform_int_distribution<int> den(1, 97);
  Verdict v;
  int compared = 0;
  for (const auto& g : stable_systems()) {
    CurveData c = build_curve(g);
    auto gmax = linf_norm(c).gamma_max;
    for (int k = 0; k < 50; ++k) {
      Rational w(num(rng), den(rng));
      w.canonicalize();
      SparsePoly slice = substitute(c.n, "omega", w);
      if (slice.is_constant()) continue;
      for (const auto& root : isolate(slice)) {
        ++compared;
        if (compare(root, gmax) == std::strong_ordering::greater) {
          v.pass = false;
          v.detail = "root above the norm at omega=" + to_string(w);
          return v;
        }
      }
    }
  }
  v.detail = std::to_string(compared) + " roots compared";
  return v;
}

Verdict a9_index_constancy() {
  const auto& c = ratio_curve();
  auto res = algorithm1(c, parse_constraints(kRatioConstraints, c.ring));
  std::mt19937_64 rng(99);
  Verdict v;
  int samples = 0;
  for (const auto& pair : res.pairs) {
    for (int k = 0; k < 5; ++k) {
      auto pt = sample_in_cell(res.cad, pair.cell, rng);
      std::map<std::string, Rational> at;
      for (std::size_t i = 0; i < pt.size(); ++i) at[res.cad.order[i]] = pt[i];
      auto norm = linf_norm(c, at);
      ++samples;
      if (norm.index != pair.index || locate_cell(res.cad, pt).stack != pair.cell.stack) {
        v.pass = false;
        v.detail = "index changed inside cell " + pair.cell.description;
        return v;
      }
    }
  }
  v.pass = samples == 20;
  v.detail = std::to_string(samples) + " extra samples over " + std::to_string(res.pairs.size()) + " cells";
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {"A1", "second-order ratio: four cells, indices 8,8,7,7", a1_cells},
      {"A2", "second-order ratio: reference sample evaluations", a2_samples},
      {"A3", "second-order ratio: closed-form norm on random points", a3_closed_form},
      {"A4", "open CAD of a^2 - 4b: four cells, root counts 2,2,2,0", a4_parabola},
      {"A5", "subresultant resultant vs Sylvester determinant", a5_resultants},
      {"A6", "Sturm-Habicht counts vs isolation counts", a6_root_counts},
      {"A7", "norm vs floating-point frequency grid", a7_grid},
      {"A8", "curve roots bounded by the norm", a8_bound},
      {"A9", "index constancy inside each cell", a9_index_constancy},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    if (!v.pass) ++failed;
    std::printf("%s %s %s (%s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
