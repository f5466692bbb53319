#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linf/realroots.hpp"
#include "linf/transfer.hpp"

namespace linf {

enum class NormSource { critical_point, leading_coeff, omega_free };

std::string_view to_string(NormSource source);

struct NormResult {
  AlgebraicNumber gamma_max;
  /// 1-based position among the ascending distinct real roots of r_poly;
  /// absent when gamma_max is not a root of r_poly.
  std::optional<int> index;
  NormSource source = NormSource::critical_point;
  /// Res(n, dn/domega, omega) of the specialized curve, in gamma.
  SparsePoly r_poly;
  int r_root_count = 0;
};

struct NormOptions {
  /// Final isolating interval width for gamma_max.
  Rational precision{1, 1 << 30};
};

/// Res(n_sf, d n_sf / d omega, omega) in (params..., gamma).
SparsePoly critical_resultant(const CurveData& c);

/// L-infinity norm of the curve at a full parameter point.
NormResult linf_norm(const CurveData& c, const std::map<std::string, Rational>& params = {},
                     const NormOptions& options = {});

/// Parameter-free convenience entry point.
NormResult linf_norm(const TransferMatrix& g, const NormOptions& options = {});

}  // namespace linf
