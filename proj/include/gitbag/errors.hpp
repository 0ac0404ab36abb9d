#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gitbag {

/// Failure categories surfaced by the library. The CLI prints `error_name()`
/// on stderr so scripts can match on it.
enum class ErrorKind {
  DimensionMismatch,
  PointNotInCone,
  WeightOutsideOmega,
  LimitExceeded,
  NoSolution,
  NoLift,
  LiftMismatch,
  TorsionClassGroup,
  NotProjective,
  InvalidFan,
  InvalidInput,
  EmptySemistableSet,
  InternalError,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::PointNotInCone: return "PointNotInCone";
    case ErrorKind::WeightOutsideOmega: return "WeightOutsideOmega";
    case ErrorKind::LimitExceeded: return "LimitExceeded";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::NoLift: return "NoLift";
    case ErrorKind::LiftMismatch: return "LiftMismatch";
    case ErrorKind::TorsionClassGroup: return "TorsionClassGroup";
    case ErrorKind::NotProjective: return "NotProjective";
    case ErrorKind::InvalidFan: return "InvalidFan";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::EmptySemistableSet: return "EmptySemistableSet";
    case ErrorKind::InternalError: return "InternalError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace gitbag
