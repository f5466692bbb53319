#pragma once

#include <random>

#include "linf/exact_poly.hpp"

namespace linf::testing {

inline SparsePoly P(std::string_view text, const RingPtr& ring) { return parse_polynomial(text, ring); }

inline SparsePoly random_poly(std::mt19937_64& rng, const RingPtr& ring, int max_deg, int terms,
                              int coeff_bits = 8) {
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::uniform_int_distribution<long> coef(-(1L << coeff_bits), 1L << coeff_bits);
  std::vector<SparsePoly::Term> t;
  for (int i = 0; i < terms; ++i) {
    Monomial m{};
    for (std::size_t v = 0; v < ring->size(); ++v) m[v] = static_cast<Exponent>(deg(rng));
    t.emplace_back(m, Rational(coef(rng)));
  }
  return SparsePoly::from_terms(ring, std::move(t));
}

inline SparsePoly random_univariate(std::mt19937_64& rng, const RingPtr& ring, int degree,
                                    int coeff_bits) {
  std::uniform_int_distribution<long> coef(-(1L << coeff_bits) + 1, (1L << coeff_bits) - 1);
  std::vector<SparsePoly::Term> t;
  for (int k = 0; k <= degree; ++k) {
    Monomial m{};
    m[0] = static_cast<Exponent>(k);
    long c = coef(rng);
    if (k == degree && c == 0) c = 1;
    t.emplace_back(m, Rational(c));
  }
  return SparsePoly::from_terms(ring, std::move(t));
}

}  // namespace linf::testing

namespace linf::testing {

// Fraction-free Gaussian elimination over a polynomial ring, used as an
// independent determinant oracle.
inline SparsePoly bareiss_det(std::vector<std::vector<SparsePoly>> m, const RingPtr& ring) {
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
        m[i][j] = t.is_zero() ? t : *divide_exact(t, prev);
      }
      m[i][k] = SparsePoly(ring);
    }
    prev = m[k][k];
  }
  return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

// Sylvester matrix with the rows of `first` on top: det = classical Res(first, second).
inline SparsePoly sylvester_resultant(const SparsePoly& first, const SparsePoly& second,
                                      std::size_t var, const RingPtr& ring) {
  auto a = coefficients(first.embed(ring), var);
  auto b = coefficients(second.embed(ring), var);
  const int da = int(a.size()) - 1;
  const int db = int(b.size()) - 1;
  const int n = da + db;
  if (n == 0) return SparsePoly(ring, 1);
  std::vector<std::vector<SparsePoly>> m(n, std::vector<SparsePoly>(n, SparsePoly(ring)));
  for (int r = 0; r < db; ++r)
    for (int k = 0; k <= da; ++k) m[r][r + da - k] = a[k];
  for (int r = 0; r < da; ++r)
    for (int k = 0; k <= db; ++k) m[db + r][r + db - k] = b[k];
  return bareiss_det(std::move(m), ring);
}

}  // namespace linf::testing

#include <complex>

#include "linf/transfer.hpp"

namespace linf::testing {

inline std::complex<double> eval_complex(const SparsePoly& p, std::complex<double> s) {
  // p is univariate in s (or constant) after specialization.
  std::complex<double> acc = 0;
  auto idx = p.ring()->index_of("s");
  for (const auto& [m, c] : p.terms()) {
    int e = idx ? m[*idx] : 0;
    acc += c.get_d() * std::pow(s, e);
  }
  return acc;
}

inline std::complex<double> eval_entry(const RationalFunction& f, std::complex<double> s) {
  return eval_complex(f.num, s) / eval_complex(f.den, s);
}

// Largest singular value of a 1x1 or 2x2 complex matrix.
inline double sigma_max(const TransferMatrix& g, double omega) {
  std::complex<double> s(0, omega);
  if (g.rows == 1 && g.cols == 1) return std::abs(eval_entry(g.at(0, 0), s));
  // Largest eigenvalue of G^H G for small matrices via the trace/determinant formula (cols <= 2).
  std::vector<std::vector<std::complex<double>>> m(g.rows, std::vector<std::complex<double>>(g.cols));
  for (std::size_t i = 0; i < g.rows; ++i)
    for (std::size_t j = 0; j < g.cols; ++j) m[i][j] = eval_entry(g.at(i, j), s);
  std::vector<std::vector<std::complex<double>>> h(g.cols, std::vector<std::complex<double>>(g.cols));
  for (std::size_t i = 0; i < g.cols; ++i)
    for (std::size_t j = 0; j < g.cols; ++j)
      for (std::size_t k = 0; k < g.rows; ++k) h[i][j] += std::conj(m[k][i]) * m[k][j];
  if (g.cols == 1) return std::sqrt(h[0][0].real());
  double tr = (h[0][0] + h[1][1]).real();
  double det = (h[0][0] * h[1][1] - h[0][1] * h[1][0]).real();
  double disc = std::max(0.0, tr * tr / 4 - det);
  return std::sqrt(tr / 2 + std::sqrt(disc));
}

// Random stable scalar transfer function of degree <= max_degree.
inline TransferMatrix random_stable_scalar(std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> pos(1, 9);
  std::uniform_int_distribution<int> coef(-9, 9);
  std::uniform_int_distribution<int> degree(1, max_degree);
  RingPtr ring = transfer_ring({});
  SparsePoly s = SparsePoly::variable(ring, "s");
  int target = degree(rng);
  SparsePoly den(ring, 1);
  int deg = 0;
  while (deg < target) {
    if (target - deg >= 2 && pos(rng) % 2 == 0) {
      // s^2 + b s + c with b, c > 0 has both roots in the open left half plane.
      den *= s * s + s.scaled(Rational(pos(rng), pos(rng))) + SparsePoly(ring, Rational(pos(rng), pos(rng)));
      deg += 2;
    } else {
      den *= s + SparsePoly(ring, Rational(pos(rng), pos(rng)));
      deg += 1;
    }
  }
  std::uniform_int_distribution<int> nd(0, target);
  int ndeg = nd(rng);
  SparsePoly num(ring);
  for (int k = 0; k <= ndeg; ++k) num += pow(s, k).scaled(Rational(coef(rng), pos(rng)));
  if (num.is_zero()) num = SparsePoly(ring, 1);
  return make_transfer({{make_rational_function(num, den)}});
}

}  // namespace linf::testing
