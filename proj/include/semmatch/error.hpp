#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semmatch {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. line() is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line),
        detail_(what) {}
  std::size_t line() const { return line_; }
  // Message without the line prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

// Well-formed input that violates a structural invariant (cycles, dangling
// ids, duplicate ids, unknown references, bad config values).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// File could not be opened or read.
class IoError : public Error {
 public:
  using Error::Error;
};

// A simulator protocol precondition was violated.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace semmatch
