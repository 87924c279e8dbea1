#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pta {

enum class ErrorKind {
  NotSquare,
  NegativeEntry,
  NonFiniteEntry,
  DimensionMismatch,
  NotIrreducible,
  NoConvergence,
  NonPositiveB,
  ZeroExponent,
  DomainError,
  BracketSearchFailed,
  NoSolution,
  MaxIterationsExceeded,
  InvalidParameter,
  ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NonPositiveB: return "NonPositiveB";
    case ErrorKind::ZeroExponent: return "ZeroExponent";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::BracketSearchFailed: return "BracketSearchFailed";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::MaxIterationsExceeded: return "MaxIterationsExceeded";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

// Every failure raised by the library is an Error; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pta
