#pragma once

#include <stdexcept>
#include <string>

namespace magicpol {

// Bad input: malformed files, violated invariants, bad arguments.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : ValidationError(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class UnknownLabelError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// The inputs are well formed but the physics has no answer there:
// a laser too close to resonance, no magic root below the critical field...
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ResonanceError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoRootError : public DomainError {
 public:
  using DomainError::DomainError;
};

class TrackingError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace magicpol
