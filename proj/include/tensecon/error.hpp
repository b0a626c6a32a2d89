#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tensecon {

/// Malformed arguments: shape mismatches, empty inputs, bad axis ids.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input data that parsed but violates a domain rule. Carries the
/// 1-based line number when the failure came from a text file (0 otherwise).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& message, std::size_t line = 0)
      : std::runtime_error(line == 0 ? message
                                     : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A label that does not resolve against its taxonomy axis.
class UnknownLabel : public ValidationError {
 public:
  UnknownLabel(std::string axis, std::string label)
      : ValidationError("unknown " + axis + " label '" + label + "'"),
        axis_(std::move(axis)),
        label_(std::move(label)) {}

  const std::string& axis() const noexcept { return axis_; }
  const std::string& label() const noexcept { return label_; }

 private:
  std::string axis_;
  std::string label_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tensecon
