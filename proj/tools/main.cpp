#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <iterator>

#include "job.hpp"

using namespace linf;
using linf::cli::Json;

namespace {

std::string read_all(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_argument, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact L-infinity norms of (parametric) transfer matrices"};
  app.set_version_flag("--version", "linf 0.1.0");

  std::string mode, transfer, transfer_file, constraints, order, precision, format, at, slice, ranges, job_file,
      output;
  int grid = 0;
  unsigned threads = 0;
  bool error_json = false;

  app.add_option("mode", mode, "norm | param | eval | cells-plot")
      ->check(CLI::IsMember({"norm", "param", "eval", "cells-plot"}));
  app.add_option("-t,--transfer", transfer, "Transfer matrix, e.g. \"1/(s+1)\" or \"[[1/(s+1), 0], [0, 2]]\"");
  app.add_option("--transfer-file", transfer_file, "Read the transfer matrix expression from a file");
  app.add_option("-c,--constraints", constraints, "Parameter constraints, e.g. \"w0 > 0, 0 < xi <= 1, r != 1\"");
  app.add_option("--order", order, "Decomposition order from base to top, e.g. xi,r,w0");
  app.add_option("--precision", precision, "Final isolating interval width p/q (default 1/2^30)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--at,--point", at, "Parameter values, e.g. \"xi=1/3, r=1/2, w0=1\"");
  app.add_option("--slice", slice, "Two plot axes for cells-plot, e.g. xi,r");
  app.add_option("--grid", grid, "Plot resolution per axis")->check(CLI::PositiveNumber);
  app.add_option("--range", ranges, "Plot window, e.g. \"xi=0:1, r=0:3\"");
  app.add_option("--threads", threads, "Worker threads for per-cell solving (0 = all cores)");
  app.add_option("--job", job_file, "JSON job file ('-' for stdin); flags override its fields");
  app.add_option("-o,--output", output, "Write the result to a file instead of stdout");
  app.add_flag("--error-json", error_json, "Report errors as JSON on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  int code = 0;
  try {
    cli::JobSpec job;
    if (!job_file.empty()) {
      Json doc;
      try {
        doc = Json::parse(read_all(job_file));
      } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed job file: ") + e.what(), e.byte);
      }
      job = cli::job_from_json(doc);
    }
    if (!mode.empty()) job.mode = cli::parse_mode(mode);
    else if (job_file.empty()) throw Error(ErrorKind::invalid_argument, "no mode given (norm, param, eval, cells-plot)");
    if (!transfer_file.empty()) transfer = read_all(transfer_file);
    if (!transfer.empty()) {
      job.transfer = transfer;
      job.transfer_json.reset();
    }
    if (!constraints.empty()) job.constraints = constraints;
    if (!order.empty()) job.order = cli::split_list(order);
    if (!precision.empty()) job.precision = cli::parse_value(precision);
    if (job.precision <= 0) throw Error(ErrorKind::invalid_argument, "precision must be positive");
    if (!format.empty()) job.format = format == "text" ? cli::Format::text : cli::Format::json;
    if (!at.empty()) {
      for (auto& [k, v] : cli::parse_bindings(at)) job.point[k] = v;
    }
    if (!slice.empty()) job.slice = cli::split_list(slice);
    if (grid > 0) job.grid = grid;
    if (!ranges.empty()) {
      for (auto& [k, v] : cli::parse_ranges(ranges)) job.ranges[k] = v;
    }
    if (threads > 0) job.threads = threads;

    cli::Outcome result = cli::run(job);
    if (output.empty()) {
      std::cout << result.output;
    } else {
      std::ofstream out(output);
      if (!out) throw Error(ErrorKind::invalid_argument, "cannot write '" + output + "'");
      out << result.output;
    }
    code = result.exit_code;
  } catch (const Error& e) {
    code = cli::exit_code_for(e.kind());
    if (error_json) std::cout << cli::error_to_json(e).dump(2) << "\n";
    else std::cerr << "linf: " << to_string(e.kind()) << " error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    code = 1;
    Error wrapped(ErrorKind::internal, e.what());
    if (error_json) std::cout << cli::error_to_json(wrapped).dump(2) << "\n";
    else std::cerr << "linf: " << e.what() << "\n";
  }
  return code;
}
