#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linf/exact_poly.hpp"

namespace linf {

/// Names with a fixed meaning that cannot be used as parameters.
inline constexpr std::string_view kLaplaceVar = "s";
inline constexpr std::string_view kOmegaVar = "omega";
inline constexpr std::string_view kGammaVar = "gamma";

/// Reduced quotient num/den of polynomials in (params..., s).
struct RationalFunction {
  SparsePoly num;
  SparsePoly den;
};

RationalFunction make_rational_function(SparsePoly num, SparsePoly den);

struct TransferMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  /// Parameter names, sorted; the ring is (params..., s).
  std::vector<std::string> params;
  RingPtr ring;
  std::vector<std::vector<RationalFunction>> entries;

  const RationalFunction& at(std::size_t i, std::size_t j) const { return entries.at(i).at(j); }
};

/// Ring (params..., s) shared by every transfer matrix with these parameters.
RingPtr transfer_ring(const std::vector<std::string>& params);

/// Builds a matrix from entries; parameters are collected from the entries.
TransferMatrix make_transfer(std::vector<std::vector<RationalFunction>> entries);

/// Parses a scalar rational expression in s and parameters, or a bracketed
/// matrix of them such as "[[1/(s+1), 0], [0, 2]]".
TransferMatrix parse_transfer(std::string_view text);

/// G~(s) = G^T(-s).
TransferMatrix conjugate(const TransferMatrix& g);

/// Specializes every parameter named in `at`.
TransferMatrix specialize(const TransferMatrix& g, const std::map<std::string, Rational>& at);

/// det(gamma^2 I - G~(s) G(s)) = n(omega, gamma) / d(omega) after s^2 = -omega^2.
struct CurveData {
  std::vector<std::string> params;
  /// (params..., omega, gamma)
  RingPtr ring;
  SparsePoly n;
  SparsePoly d;
  SparsePoly n_squarefree;
  SparsePoly lc_omega;
  /// The matrix the curve came from, kept for pole/properness checks.
  std::optional<TransferMatrix> source;
};

RingPtr curve_ring(const std::vector<std::string>& params);

CurveData build_curve(const TransferMatrix& g);

/// Builds curve data straight from a numerator polynomial (no source matrix).
CurveData curve_from_polynomial(const SparsePoly& n, const SparsePoly& d);

/// True iff every specialized entry is proper and has no pole on the imaginary
/// axis. `at` must fix every parameter.
bool check_rl_infinity(const TransferMatrix& g, const std::map<std::string, Rational>& at);

/// Fraction-free determinant of a square polynomial matrix.
SparsePoly bareiss_determinant(std::vector<std::vector<SparsePoly>> m, const RingPtr& ring);

}  // namespace linf
