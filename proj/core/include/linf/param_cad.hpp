#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linf/norm_core.hpp"

namespace linf {

enum class Relation { gt, lt, ge, le, ne, eq };

std::string_view to_string(Relation rel);

/// poly rel 0.
struct Constraint {
  SparsePoly poly;
  Relation rel;
};

using SemiAlgebraicConstraints = std::vector<Constraint>;

/// Parses a comma/semicolon separated list such as "w0 > 0, 0 < xi <= 1, r != 1".
/// Chained comparisons expand into one constraint per operator.
SemiAlgebraicConstraints parse_constraints(std::string_view text, const RingPtr& ring);

/// True if the point satisfies every constraint whose variables it fixes.
bool satisfies(const SemiAlgebraicConstraints& sp, const std::map<std::string, Rational>& point);

struct DiscriminantVarietySet {
  /// Squarefree, pairwise coprime, nonconstant polynomials in the parameters.
  std::vector<SparsePoly> factors;
};

/// Bad parameter values of {R = 0, S_p} with respect to the projection on the parameters.
DiscriminantVarietySet discriminant_variety(const SparsePoly& r, const SemiAlgebraicConstraints& sp,
                                            std::string_view main_var = kGammaVar);

struct Cell {
  /// Rational sample point, one coordinate per variable of the decomposition order.
  std::vector<Rational> sample;
  /// Per level: the cell lies strictly between roots `first` and `second`
  /// (1-based among the distinct roots at that level; 0 and count+1 stand for
  /// minus and plus infinity).
  std::vector<std::pair<int, int>> stack;
  /// Signs of each discriminant-variety factor at the sample.
  std::vector<int> sign_vector;
  std::string description;
};

struct CadResult {
  /// Variables from the base (first) to the top (last) level.
  std::vector<std::string> order;
  DiscriminantVarietySet factors;
  /// levels[k]: projection polynomials whose top variable is order[k].
  std::vector<std::vector<SparsePoly>> levels;
  std::vector<Cell> cells;

  std::map<std::string, Rational> sample_map(const Cell& cell) const;
};

/// Default order: the variable of lowest maximal degree goes last (eliminated first).
std::vector<std::string> default_order(const std::vector<SparsePoly>& polys,
                                       const std::vector<std::string>& vars);

inline constexpr std::size_t kMaxCadDimension = 3;

/// Open cylindrical decomposition of R^d minus the factor zero set, restricted
/// to the cells that satisfy the strict form of every constraint.
CadResult open_cad(const DiscriminantVarietySet& factors, const SemiAlgebraicConstraints& sp,
                   const std::vector<std::string>& order);

/// The cell containing `point` (coordinates in `cad.order`). Throws a boundary
/// error when the point lies on a projection polynomial, and invalid_argument
/// when it violates the constraints.
const Cell& locate_cell(const CadResult& cad, const std::vector<Rational>& point);

/// Random rational point inside a cell, coordinates in `cad.order`.
std::vector<Rational> sample_in_cell(const CadResult& cad, const Cell& cell, std::mt19937_64& rng);

enum class CellStatus { ok, invalid_at_sample, not_well_behaved };

std::string_view to_string(CellStatus status);

struct CellIndexPair {
  Cell cell;
  CellStatus status = CellStatus::ok;
  std::optional<NormResult> norm;
  std::optional<int> index;
  std::string message;
};

struct Algorithm1Options {
  /// Empty: use default_order.
  std::vector<std::string> order;
  NormOptions norm;
  /// Worker threads for per-cell solving; 0 means hardware concurrency.
  unsigned threads = 0;
};

struct Algorithm1Result {
  SparsePoly r_poly;
  CadResult cad;
  std::vector<CellIndexPair> pairs;
};

Algorithm1Result algorithm1(const CurveData& c, const SemiAlgebraicConstraints& sp,
                            const Algorithm1Options& options = {});

/// Solves the curve at one rational parameter point the way algorithm1 does
/// for a cell sample.
CellIndexPair solve_at(const CurveData& c, const Cell& cell, const std::map<std::string, Rational>& point,
                       const NormOptions& options);

}  // namespace linf
