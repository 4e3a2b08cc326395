#include "evapctl/errors.hpp"

namespace evapctl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::SupportTooLarge: return "SupportTooLarge";
    case ErrorKind::SupportUnresolved: return "SupportUnresolved";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DegenerateProbe: return "DegenerateProbe";
    case ErrorKind::LadderTooShort: return "LadderTooShort";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::DeltaZero: return "DeltaZero";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::FormatError: return "FormatError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

NonFiniteError::NonFiniteError(int step, const std::string& what)
    : Error(ErrorKind::NonFinite, what + " (step " + std::to_string(step) + ")"), step_(step) {}

ParseError::ParseError(int line, const std::string& what)
    : Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what), line_(line) {}

ValidationError::ValidationError(std::string key, std::string reason)
    : Error(ErrorKind::ValidationError, key + ": " + reason),
      key_(std::move(key)),
      reason_(std::move(reason)) {}

}  // namespace evapctl
