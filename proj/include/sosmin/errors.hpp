#pragma once

#include <stdexcept>
#include <string>

namespace sosmin {

/// Failure categories surfaced by the library. The CLI maps `Validation`
/// and `DimensionMismatch` to exit code 2 and everything else to 3.
enum class ErrorKind {
  Validation,
  DimensionMismatch,
  NonConvergence,
  InconsistentModel,
  DegeneratePosition,
  RankAmbiguity,
  RetryExhausted,
  DegenerateSpan,
  EmptyComplement,
  NoDeltaFound,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::InconsistentModel: return "InconsistentModel";
    case ErrorKind::DegeneratePosition: return "DegeneratePosition";
    case ErrorKind::RankAmbiguity: return "RankAmbiguity";
    case ErrorKind::RetryExhausted: return "RetryExhausted";
    case ErrorKind::DegenerateSpan: return "DegenerateSpan";
    case ErrorKind::EmptyComplement: return "EmptyComplement";
    case ErrorKind::NoDeltaFound: return "NoDeltaFound";
  }
  return "Error";
}

}  // namespace sosmin
