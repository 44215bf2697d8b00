#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wsc {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// Operand sizes or simplex orders do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "dimension"; }
};

/// A structural invariant (complex closure, metric positivity, config range) is violated.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::string what, std::vector<std::string> violations = {})
      : Error(std::move(what)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const noexcept { return violations_; }
  const char* kind() const noexcept override { return "validation"; }

 private:
  std::vector<std::string> violations_;
};

/// Malformed input file. `field` names the offending key, `line` is 1-based (0 if unknown).
class ParseError : public Error {
 public:
  ParseError(std::string what, std::string field = {}, int line = 0)
      : Error(std::move(what)), field_(std::move(field)), line_(line) {}
  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }
  const char* kind() const noexcept override { return "parse"; }

 private:
  std::string field_;
  int line_;
};

/// Triangles whose circulation energy is too small for the closed-form weights.
class DegenerateError : public Error {
 public:
  DegenerateError(std::string what, std::vector<long> indices)
      : Error(std::move(what)), indices_(std::move(indices)) {}
  const std::vector<long>& indices() const noexcept { return indices_; }
  const char* kind() const noexcept override { return "degenerate"; }

 private:
  std::vector<long> indices_;
};

}  // namespace wsc
