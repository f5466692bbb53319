#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace linf {

/// Failure categories. The CLI maps these onto its exit-code taxonomy.
enum class ErrorKind {
  invalid_argument,
  ring_mismatch,
  parse,
  degenerate,
  not_well_behaved,
  unsupported_dimension,
  unsupported_constraint,
  boundary,
  internal,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Syntax error carrying the byte offset where parsing stopped.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(ErrorKind::parse, what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace linf
