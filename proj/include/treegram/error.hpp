#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace treegram {

/// Base class of every exception raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed term, grammar, path or formula text.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        detail_(what),
        line_(line),
        column_(column) {}

  const std::string& detail() const noexcept { return detail_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string detail_;
  std::size_t line_;
  std::size_t column_;
};

/// Structurally invalid input: cycles, rank mismatches, bad addresses, ...
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A configured size or budget limit would be exceeded.
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace treegram
