#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace toda {

/// Failure categories raised by the library. The names double as the
/// identifiers written into verification reports.
enum class ErrorKind {
  DegenerateDivision,
  InsufficientOrder,
  DegenerateRoot,
  IllegalComposition,
  NotInvertibleAtOrigin,
  NotAUnit,
  SingularEvaluation,
  OutOfDomain,
  IllegalWeight,
  InternalInconsistency,
  DegenerateSeed,
  ArityMismatch,
  NonvanishingTrace,
  NonRealExponents,
  RepeatedExponents,
  LogarithmRequired,
  NotAnExponent,
  QuadratureFailure,
  GridInvariant,
  ConfigParse,
  ConfigValidation,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& what);

}  // namespace toda
