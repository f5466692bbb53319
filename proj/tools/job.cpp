#include "job.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "linf/expr.hpp"

namespace linf::cli {

Mode parse_mode(std::string_view text) {
  if (text == "norm") return Mode::norm;
  if (text == "param") return Mode::param;
  if (text == "eval") return Mode::eval;
  if (text == "cells-plot") return Mode::cells_plot;
  throw Error(ErrorKind::invalid_argument, "unknown mode '" + std::string(text) + "'");
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::norm: return "norm";
    case Mode::param: return "param";
    case Mode::eval: return "eval";
    case Mode::cells_plot: return "cells-plot";
  }
  return "norm";
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string rational_text(const Rational& q) { return linf::to_string(q); }

Json point_to_json(const std::map<std::string, Rational>& point) {
  Json out = Json::object();
  for (const auto& [k, v] : point) out[k] = rational_text(v);
  return out;
}

std::map<std::string, Rational> point_from_json(const Json& doc) {
  std::map<std::string, Rational> out;
  for (const auto& [k, v] : doc.items()) out[k] = v.is_string() ? parse_value(v.get<std::string>()) : parse_value(v.dump());
  return out;
}

}  // namespace

Rational parse_value(std::string_view text) {
  ParsedRational r = parse_rational_expression(text, make_ring({}));
  if (!r.num.is_constant() || !r.den.is_constant()) {
    throw Error(ErrorKind::parse, "expected a rational number, got '" + std::string(text) + "'");
  }
  if (r.num.is_zero()) return 0;
  return r.num.constant_value() / r.den.constant_value();
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',' || ch == ';') {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

std::map<std::string, Rational> parse_bindings(std::string_view text) {
  std::map<std::string, Rational> out;
  for (const auto& item : split_list(text)) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::parse, "expected name=value, got '" + item + "'");
    out[trim(item.substr(0, eq))] = parse_value(item.substr(eq + 1));
  }
  return out;
}

std::map<std::string, AxisRange> parse_ranges(std::string_view text) {
  std::map<std::string, AxisRange> out;
  for (const auto& item : split_list(text)) {
    auto eq = item.find('=');
    auto colon = item.find(':', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || colon == std::string::npos) {
      throw Error(ErrorKind::parse, "expected name=low:high, got '" + item + "'");
    }
    AxisRange r{parse_value(item.substr(eq + 1, colon - eq - 1)), parse_value(item.substr(colon + 1))};
    if (!(r.low < r.high)) throw Error(ErrorKind::invalid_argument, "empty range in '" + item + "'");
    out[trim(item.substr(0, eq))] = r;
  }
  return out;
}

JobSpec job_from_json(const Json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::parse, "job document must be a JSON object");
  JobSpec job;
  if (doc.contains("mode")) job.mode = parse_mode(doc.at("mode").get<std::string>());
  if (doc.contains("transfer")) {
    const Json& t = doc.at("transfer");
    if (t.is_string()) job.transfer = t.get<std::string>();
    else job.transfer_json = t;
  }
  if (doc.contains("constraints")) {
    const Json& c = doc.at("constraints");
    if (c.is_array()) {
      for (const auto& item : c) job.constraints += (job.constraints.empty() ? "" : ", ") + item.get<std::string>();
    } else {
      job.constraints = c.get<std::string>();
    }
  }
  if (doc.contains("order")) {
    const Json& o = doc.at("order");
    job.order = o.is_array() ? o.get<std::vector<std::string>>() : split_list(o.get<std::string>());
  }
  if (doc.contains("precision")) {
    const Json& p = doc.at("precision");
    job.precision = parse_value(p.is_string() ? p.get<std::string>() : p.dump());
  }
  if (doc.contains("format")) {
    auto f = doc.at("format").get<std::string>();
    if (f != "json" && f != "text") throw Error(ErrorKind::invalid_argument, "unknown format '" + f + "'");
    job.format = f == "text" ? Format::text : Format::json;
  }
  if (doc.contains("point")) job.point = point_from_json(doc.at("point"));
  if (doc.contains("slice")) job.slice = doc.at("slice").get<std::vector<std::string>>();
  if (doc.contains("grid")) job.grid = doc.at("grid").get<int>();
  if (doc.contains("ranges")) {
    for (const auto& [k, v] : doc.at("ranges").items()) {
      auto lim = v.get<std::vector<std::string>>();
      if (lim.size() != 2) throw Error(ErrorKind::parse, "range for '" + k + "' needs two values");
      job.ranges[k] = {parse_value(lim[0]), parse_value(lim[1])};
    }
  }
  if (doc.contains("threads")) job.threads = doc.at("threads").get<unsigned>();
  return job;
}

Json job_to_json(const JobSpec& job) {
  Json out;
  out["mode"] = std::string(to_string(job.mode));
  if (job.transfer_json) out["transfer"] = *job.transfer_json;
  else out["transfer"] = job.transfer;
  out["constraints"] = job.constraints;
  out["order"] = job.order;
  out["precision"] = rational_text(job.precision);
  out["format"] = job.format == Format::json ? "json" : "text";
  out["point"] = point_to_json(job.point);
  out["slice"] = job.slice;
  out["grid"] = job.grid;
  Json ranges = Json::object();
  for (const auto& [k, r] : job.ranges) ranges[k] = {rational_text(r.low), rational_text(r.high)};
  out["ranges"] = ranges;
  out["threads"] = job.threads;
  return out;
}

Json transfer_to_json(const TransferMatrix& g) {
  Json out;
  out["rows"] = g.rows;
  out["cols"] = g.cols;
  out["params"] = g.params;
  Json rows = Json::array();
  for (const auto& row : g.entries) {
    Json r = Json::array();
    for (const auto& e : row) r.push_back({{"num", e.num.to_string()}, {"den", e.den.to_string()}});
    rows.push_back(r);
  }
  out["entries"] = rows;
  return out;
}

TransferMatrix transfer_from_json(const Json& doc) {
  if (doc.is_string()) return parse_transfer(doc.get<std::string>());
  if (!doc.is_object() || !doc.contains("entries")) {
    throw Error(ErrorKind::parse, "transfer must be an expression string or an object with entries");
  }
  std::string text = "[";
  std::size_t cols = 0;
  const Json& rows = doc.at("entries");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0) cols = rows[i].size();
    if (rows[i].size() != cols) throw Error(ErrorKind::invalid_argument, "transfer matrix rows have different lengths");
    text += i ? ", [" : "[";
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      const Json& e = rows[i][j];
      if (j) text += ", ";
      if (e.is_string()) text += e.get<std::string>();
      else text += "(" + e.at("num").get<std::string>() + ")/(" + e.value("den", std::string("1")) + ")";
    }
    text += "]";
  }
  text += "]";
  TransferMatrix g = parse_transfer(text);
  if (doc.contains("rows") && doc.at("rows").get<std::size_t>() != g.rows) {
    throw Error(ErrorKind::invalid_argument, "row count does not match the entries");
  }
  if (doc.contains("cols") && doc.at("cols").get<std::size_t>() != g.cols) {
    throw Error(ErrorKind::invalid_argument, "column count does not match the entries");
  }
  return g;
}

Json algebraic_to_json(const AlgebraicNumber& a) {
  Json out;
  out["defining"] = a.defining().to_string();
  out["low"] = rational_text(a.interval().low);
  out["high"] = rational_text(a.interval().high);
  out["exact"] = a.is_exact();
  out["approx"] = a.to_double();
  return out;
}

AlgebraicNumber algebraic_from_json(const Json& doc) {
  SparsePoly def = parse_polynomial(doc.at("defining").get<std::string>());
  IsolatingInterval iv{parse_rational(doc.at("low").get<std::string>()),
                       parse_rational(doc.at("high").get<std::string>()), doc.at("exact").get<bool>()};
  return AlgebraicNumber(def, iv);
}

Json norm_to_json(const NormResult& r) {
  Json out;
  out["gamma_max"] = algebraic_to_json(r.gamma_max);
  out["index"] = r.index ? Json(*r.index) : Json(nullptr);
  out["source"] = std::string(to_string(r.source));
  out["r_poly"] = r.r_poly.to_string();
  out["r_root_count"] = r.r_root_count;
  return out;
}

Json pair_to_json(const CellIndexPair& p, const CadResult& cad, std::size_t id) {
  Json out;
  out["id"] = id;
  out["description"] = p.cell.description;
  out["sample"] = point_to_json(cad.sample_map(p.cell));
  Json stack = Json::array();
  for (const auto& [lo, hi] : p.cell.stack) stack.push_back({lo, hi});
  out["stack"] = stack;
  out["signs"] = p.cell.sign_vector;
  out["status"] = std::string(to_string(p.status));
  out["index"] = p.index ? Json(*p.index) : Json(nullptr);
  out["norm"] = p.norm ? norm_to_json(*p.norm) : Json(nullptr);
  if (!p.message.empty()) out["message"] = p.message;
  return out;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return 2;
    case ErrorKind::degenerate:
    case ErrorKind::not_well_behaved: return 3;
    case ErrorKind::unsupported_dimension: return 4;
    default: return 1;
  }
}

Json error_to_json(const Error& e) {
  Json err;
  err["kind"] = std::string(to_string(e.kind()));
  err["message"] = e.what();
  if (auto* pe = dynamic_cast<const ParseError*>(&e)) err["position"] = pe->position();
  err["exit_code"] = exit_code_for(e.kind());
  return Json{{"error", err}};
}

namespace {

struct Loaded {
  TransferMatrix g;
  SemiAlgebraicConstraints sp;
};

Loaded load(const JobSpec& job) {
  if (!job.transfer_json && trim(job.transfer).empty()) {
    throw Error(ErrorKind::invalid_argument, "no transfer matrix given");
  }
  Loaded out{job.transfer_json ? transfer_from_json(*job.transfer_json) : parse_transfer(job.transfer), {}};
  if (!trim(job.constraints).empty()) {
    out.sp = parse_constraints(job.constraints, curve_ring(out.g.params));
  }
  return out;
}

void require_params(const TransferMatrix& g, Mode mode) {
  if (g.params.empty()) {
    throw Error(ErrorKind::invalid_argument,
                "mode " + std::string(to_string(mode)) + " needs at least one parameter; use norm instead");
  }
}

std::vector<Rational> ordered_point(const CadResult& cad, const std::map<std::string, Rational>& point) {
  std::vector<Rational> out;
  for (const auto& v : cad.order) {
    auto it = point.find(v);
    if (it == point.end()) throw Error(ErrorKind::invalid_argument, "point does not fix parameter '" + v + "'");
    out.push_back(it->second);
  }
  return out;
}

Algorithm1Options a1_options(const JobSpec& job) {
  Algorithm1Options opt;
  opt.order = job.order;
  opt.norm.precision = job.precision;
  opt.threads = job.threads;
  return opt;
}

Json run_norm(const JobSpec& job, const Loaded& in) {
  for (const auto& p : in.g.params) {
    if (!job.point.count(p)) {
      throw Error(ErrorKind::invalid_argument, "norm mode needs every parameter bound; '" + p + "' is free");
    }
  }
  if (!satisfies(in.sp, job.point)) {
    throw Error(ErrorKind::invalid_argument, "parameter point violates the constraints");
  }
  if (!check_rl_infinity(in.g, job.point)) {
    throw Error(ErrorKind::degenerate, "system is improper or has a pole on the imaginary axis");
  }
  NormOptions opt;
  opt.precision = job.precision;
  Json out;
  out["mode"] = "norm";
  out["point"] = point_to_json(job.point);
  Json n = norm_to_json(linf_norm(build_curve(in.g), job.point, opt));
  for (auto& [k, v] : n.items()) out[k] = v;
  return out;
}

Json cad_header(const Algorithm1Result& res) {
  Json out;
  out["order"] = res.cad.order;
  out["r_poly"] = res.r_poly.to_string();
  Json f = Json::array();
  for (const auto& p : res.cad.factors.factors) f.push_back(p.to_string());
  out["factors"] = f;
  return out;
}

Json run_param(const JobSpec& job, const Loaded& in) {
  require_params(in.g, job.mode);
  CurveData c = build_curve(in.g);
  Algorithm1Result res = algorithm1(c, in.sp, a1_options(job));
  Json out;
  out["mode"] = "param";
  Json header = cad_header(res);
  for (auto& [k, v] : header.items()) out[k] = v;
  Json cells = Json::array();
  for (std::size_t i = 0; i < res.pairs.size(); ++i) cells.push_back(pair_to_json(res.pairs[i], res.cad, i + 1));
  out["cells"] = cells;
  return out;
}

std::size_t cell_id(const CadResult& cad, const Cell& cell) {
  for (std::size_t i = 0; i < cad.cells.size(); ++i) {
    if (cad.cells[i].stack == cell.stack) return i + 1;
  }
  return 0;
}

Json run_eval(const JobSpec& job, const Loaded& in) {
  require_params(in.g, job.mode);
  CurveData c = build_curve(in.g);
  Algorithm1Result res = algorithm1(c, in.sp, a1_options(job));
  const Cell& cell = locate_cell(res.cad, ordered_point(res.cad, job.point));
  std::size_t id = cell_id(res.cad, cell);
  const CellIndexPair& row = res.pairs.at(id - 1);
  std::map<std::string, Rational> at;
  for (const auto& v : res.cad.order) at[v] = job.point.at(v);
  NormOptions opt;
  opt.precision = job.precision;
  CellIndexPair here = solve_at(c, cell, at, opt);

  Json out;
  out["mode"] = "eval";
  out["point"] = point_to_json(at);
  out["cell"] = {{"id", id}, {"description", cell.description},
                 {"index", row.index ? Json(*row.index) : Json(nullptr)}};
  out["status"] = std::string(to_string(here.status));
  out["index"] = here.index ? Json(*here.index) : Json(nullptr);
  out["norm"] = here.norm ? norm_to_json(*here.norm) : Json(nullptr);
  out["index_matches_cell"] = here.index == row.index;
  if (!here.message.empty()) out["message"] = here.message;
  return out;
}

std::string decimal(const Rational& q) {
  std::ostringstream os;
  os << std::setprecision(12) << q.get_d();
  return os.str();
}

std::string run_cells_plot(const JobSpec& job, const Loaded& in) {
  require_params(in.g, job.mode);
  CurveData c = build_curve(in.g);
  Algorithm1Result res = algorithm1(c, in.sp, a1_options(job));
  const auto& cad = res.cad;
  std::vector<std::string> axes = job.slice;
  if (axes.empty()) {
    if (cad.order.size() != 2) {
      throw Error(ErrorKind::invalid_argument, "cells-plot needs --slice v1,v2 unless there are exactly two parameters");
    }
    axes = cad.order;
  }
  if (axes.size() != 2 || axes[0] == axes[1]) throw Error(ErrorKind::invalid_argument, "slice needs two distinct parameters");
  for (const auto& a : axes) {
    if (std::find(cad.order.begin(), cad.order.end(), a) == cad.order.end()) {
      throw Error(ErrorKind::invalid_argument, "slice parameter '" + a + "' is unknown");
    }
  }
  if (job.grid < 1) throw Error(ErrorKind::invalid_argument, "grid must be positive");

  std::map<std::string, Rational> fixed = job.point;
  std::map<std::string, AxisRange> ranges = job.ranges;
  for (const auto& v : cad.order) {
    bool is_axis = v == axes[0] || v == axes[1];
    // Default window: the span of the cell samples, padded by one.
    Rational lo = 0, hi = 0;
    bool first = true;
    for (const auto& cell : cad.cells) {
      Rational x = cad.sample_map(cell).at(v);
      if (first || x < lo) lo = x;
      if (first || x > hi) hi = x;
      first = false;
    }
    if (is_axis && !ranges.count(v)) ranges[v] = {lo - 1, hi + 1};
    if (!is_axis && !fixed.count(v)) {
      if (cad.cells.empty()) throw Error(ErrorKind::invalid_argument, "no cells; fix '" + v + "' with --at");
      fixed[v] = cad.sample_map(cad.cells.front()).at(v);
    }
  }

  std::ostringstream os;
  os << "# " << axes[0] << " " << axes[1] << " cell_id\n";
  for (const auto& v : cad.order) {
    if (v != axes[0] && v != axes[1]) os << "# fixed " << v << " = " << linf::to_string(fixed.at(v)) << "\n";
  }
  const AxisRange& rx = ranges.at(axes[0]);
  const AxisRange& ry = ranges.at(axes[1]);
  for (int i = 0; i < job.grid; ++i) {
    for (int j = 0; j < job.grid; ++j) {
      std::map<std::string, Rational> pt = fixed;
      Rational x = rx.low + (rx.high - rx.low) * Rational(2 * i + 1, 2 * job.grid);
      Rational y = ry.low + (ry.high - ry.low) * Rational(2 * j + 1, 2 * job.grid);
      x.canonicalize();
      y.canonicalize();
      pt[axes[0]] = x;
      pt[axes[1]] = y;
      long id = -1;
      try {
        id = long(cell_id(cad, locate_cell(cad, ordered_point(cad, pt))));
      } catch (const Error& e) {
        // 0 marks a boundary point, -1 a point outside the constraints.
        if (e.kind() == ErrorKind::boundary) id = 0;
        else if (e.kind() != ErrorKind::invalid_argument) throw;
      }
      os << decimal(x) << " " << decimal(y) << " " << id << "\n";
    }
  }
  return os.str();
}

void text_norm(std::ostringstream& os, const Json& n, const std::string& indent) {
  if (n.is_null()) {
    os << indent << "norm: none\n";
    return;
  }
  const Json& g = n.at("gamma_max");
  os << indent << "norm: " << g.at("approx").get<double>() << "  in [" << g.at("low").get<std::string>() << ", "
     << g.at("high").get<std::string>() << "]" << (g.at("exact").get<bool>() ? " (exact)" : "") << "\n";
  os << indent << "index: " << (n.at("index").is_null() ? std::string("-") : n.at("index").dump()) << " of "
     << n.at("r_root_count").get<int>() << " roots, source " << n.at("source").get<std::string>() << "\n";
}

}  // namespace

std::string render_text(const Json& result) {
  std::ostringstream os;
  std::string mode = result.value("mode", std::string());
  if (mode == "norm") {
    text_norm(os, result, "");
  } else if (mode == "param") {
    os << "order: ";
    for (std::size_t i = 0; i < result.at("order").size(); ++i) os << (i ? ", " : "") << result.at("order")[i].get<std::string>();
    os << "\nfactors:\n";
    for (const auto& f : result.at("factors")) os << "  " << f.get<std::string>() << "\n";
    for (const auto& c : result.at("cells")) {
      os << "cell " << c.at("id").get<std::size_t>() << ": " << c.at("description").get<std::string>() << "\n";
      os << "  sample:";
      for (const auto& [k, v] : c.at("sample").items()) os << " " << k << "=" << v.get<std::string>();
      os << "\n  status: " << c.at("status").get<std::string>() << "\n";
      text_norm(os, c.at("norm"), "  ");
    }
  } else if (mode == "eval") {
    const Json& cell = result.at("cell");
    os << "cell " << cell.at("id").get<std::size_t>() << ": " << cell.at("description").get<std::string>() << "\n";
    os << "status: " << result.at("status").get<std::string>() << "\n";
    text_norm(os, result.at("norm"), "");
  } else {
    os << result.dump(2) << "\n";
  }
  return os.str();
}

Outcome run(const JobSpec& job) {
  Loaded in = load(job);
  Outcome out;
  if (job.mode == Mode::cells_plot) {
    out.output = run_cells_plot(job, in);
    return out;
  }
  Json doc = job.mode == Mode::norm    ? run_norm(job, in)
             : job.mode == Mode::param ? run_param(job, in)
                                       : run_eval(job, in);
  out.output = job.format == Format::json ? doc.dump(2) + "\n" : render_text(doc);
  return out;
}

}  // namespace linf::cli
