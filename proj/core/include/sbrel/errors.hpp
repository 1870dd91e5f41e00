#pragma once

#include <stdexcept>
#include <string>

namespace sbrel {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a formula (e.g. reliability outside [0, 1]).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid distribution or model parameters.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        message_(what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }
  /// Message without the line prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t line_;
};

/// Moment identities violated beyond tolerance; the rule is too coarse.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// A form whose observed-score variance is zero.
class DegenerateFormError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration would exceed the configured cap.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

}  // namespace sbrel
