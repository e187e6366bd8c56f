#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace invroot {

/// Raised when a computation leaves the representable domain of its model,
/// e.g. a non-finite value reaching a fixed-point quantizer.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input matrix is not symmetric positive definite.
class NotSpdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace invroot
