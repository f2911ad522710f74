#include "toda/error.hpp"

namespace toda {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DegenerateDivision: return "DegenerateDivision";
    case ErrorKind::InsufficientOrder: return "InsufficientOrder";
    case ErrorKind::DegenerateRoot: return "DegenerateRoot";
    case ErrorKind::IllegalComposition: return "IllegalComposition";
    case ErrorKind::NotInvertibleAtOrigin: return "NotInvertibleAtOrigin";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::SingularEvaluation: return "SingularEvaluation";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::IllegalWeight: return "IllegalWeight";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::DegenerateSeed: return "DegenerateSeed";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::NonvanishingTrace: return "NonvanishingTrace";
    case ErrorKind::NonRealExponents: return "NonRealExponents";
    case ErrorKind::RepeatedExponents: return "RepeatedExponents";
    case ErrorKind::LogarithmRequired: return "LogarithmRequired";
    case ErrorKind::NotAnExponent: return "NotAnExponent";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::GridInvariant: return "GridInvariant";
    case ErrorKind::ConfigParse: return "ConfigParse";
    case ErrorKind::ConfigValidation: return "ConfigValidation";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace toda
