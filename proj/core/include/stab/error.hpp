#pragma once

#include <stdexcept>
#include <string>

namespace stab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed instance or solution text. `line()` is 1-based, 0 if unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? what + " at line " + std::to_string(line) : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Raised by the LP core for numerical failures (not for infeasibility).
class LpError : public Error {
 public:
  using Error::Error;
};

/// Brute-force enumeration hit its structure or time cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace stab
