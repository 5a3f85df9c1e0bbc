#pragma once

#include <stdexcept>
#include <string>

namespace cvn {

/// Base of every error raised by the library. Each subclass maps onto one
/// CLI exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 5; }
};

class InvalidInput : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class RankMismatch : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

class BudgetExhausted : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

/// Raised when an internal consistency check fails (a bug, or an input that
/// slipped past validation).
class InvariantViolation : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 5; }
};

/// Outcome of a validate_* call. `message` names the first violated
/// invariant; `offending` is the id involved, or -1.
struct ValidationReport {
  bool ok = true;
  std::string message;
  int offending = -1;

  explicit operator bool() const noexcept { return ok; }

  static ValidationReport accept() { return {}; }
  static ValidationReport reject(std::string why, int id = -1) {
    return {false, std::move(why), id};
  }
};

}  // namespace cvn
