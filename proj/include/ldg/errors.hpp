#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ldg {

enum class ErrorCode {
  InvalidConfig,
  DegenerateDirector,
  ResolutionTooCoarse,
  ShapeError,
  NonFiniteField,
  AxisConstraintViolation,
  NotSphereValued,
  UnsupportedCenter,
  NoDescent,
  DegenerateRing,
  CoreTooLarge,
  CoreUnderResolved,
  ShootingBracketError,
  OutOfTable,
  OutOfDomain,
  ParseError,
  FormatVersion,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ldg
