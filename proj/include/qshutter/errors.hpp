#pragma once

#include <stdexcept>
#include <string>

namespace qshutter {

/// Invalid input: malformed profile, out-of-range position, bad grid.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative procedure failed to converge or a consistency check failed.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The unscaled value of a special function does not fit in a double.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// The buildup series ends before the exponential regime breaks down.
class NoOnsetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text input could not be parsed; carries the offending line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace qshutter
