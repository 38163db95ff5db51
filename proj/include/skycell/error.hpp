#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skycell {

enum class ErrorKind {
  InvalidArgument,
  Domain,
  Parse,
  Io,
  Degenerate,
  Diverged,
  NotFound,
  Version,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

// Parse failure pinned to a 1-based line and column of the input.
class ParseError : public Error {
public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(ErrorKind::Parse, "line " + std::to_string(line) + ", column " +
                                    std::to_string(column) + ": " + what),
        line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

} // namespace skycell
