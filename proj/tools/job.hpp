#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linf/param_cad.hpp"

namespace linf::cli {

using Json = nlohmann::ordered_json;

enum class Mode { norm, param, eval, cells_plot };
enum class Format { json, text };

Mode parse_mode(std::string_view text);
std::string_view to_string(Mode mode);

struct AxisRange {
  Rational low;
  Rational high;
};

struct JobSpec {
  Mode mode = Mode::norm;
  /// Expression text; ignored when transfer_json is set.
  std::string transfer;
  std::optional<Json> transfer_json;
  std::string constraints;
  std::vector<std::string> order;
  Rational precision{1, 1 << 30};
  Format format = Format::json;
  /// Parameter bindings for norm, query point for eval, fixed coordinates for cells-plot.
  std::map<std::string, Rational> point;
  std::vector<std::string> slice;
  int grid = 40;
  std::map<std::string, AxisRange> ranges;
  unsigned threads = 0;
};

JobSpec job_from_json(const Json& doc);
Json job_to_json(const JobSpec& job);

Json transfer_to_json(const TransferMatrix& g);
TransferMatrix transfer_from_json(const Json& doc);

Json algebraic_to_json(const AlgebraicNumber& a);
AlgebraicNumber algebraic_from_json(const Json& doc);

Json norm_to_json(const NormResult& r);
Json pair_to_json(const CellIndexPair& p, const CadResult& cad, std::size_t id);

/// Accepts "p/q", integers, decimals and constant expressions such as 2^-30.
Rational parse_value(std::string_view text);
/// "xi=1/2, r=2" into a map.
std::map<std::string, Rational> parse_bindings(std::string_view text);
/// "xi=0:1, r=0:3" into axis ranges.
std::map<std::string, AxisRange> parse_ranges(std::string_view text);
std::vector<std::string> split_list(std::string_view text);

struct Outcome {
  int exit_code = 0;
  /// Document printed on stdout (JSON or text, or plot rows).
  std::string output;
};

/// Exit codes: 0 ok, 1 usage/other, 2 parse, 3 degenerate or not well-behaved, 4 unsupported dimension.
int exit_code_for(ErrorKind kind);
Json error_to_json(const Error& e);

/// Runs a job. Library errors propagate as linf::Error.
Outcome run(const JobSpec& job);

/// Renders a JSON result document as plain text.
std::string render_text(const Json& result);

}  // namespace linf::cli
