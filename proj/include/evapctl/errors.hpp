#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace evapctl {

enum class ErrorKind {
  GridMismatch,
  InvalidGrid,
  SupportTooLarge,
  SupportUnresolved,
  NonFinite,
  DegenerateProbe,
  LadderTooShort,
  ShapeMismatch,
  DeltaZero,
  ParseError,
  ValidationError,
  IoError,
  FormatError,
};

std::string_view to_string(ErrorKind kind);

/// Base error carrying a machine-readable kind; every library failure is one of these.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A time step produced NaN/Inf. `step` is the index n of the failing transition n -> n+1.
class NonFiniteError : public Error {
 public:
  NonFiniteError(int step, const std::string& what);
  int step() const noexcept { return step_; }

 private:
  int step_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string key, std::string reason);
  const std::string& key() const noexcept { return key_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string key_;
  std::string reason_;
};

}  // namespace evapctl
