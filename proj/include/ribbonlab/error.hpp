#pragma once

#include <stdexcept>
#include <string>

namespace ribbonlab {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line()` is 1-based; 0 means "whole input".
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line),
        detail_(message) {}

  int line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  int line_;
  std::string detail_;
};

/// A move whose preconditions do not hold on the data it was applied to.
class MoveError : public Error {
 public:
  using Error::Error;
};

}  // namespace ribbonlab
