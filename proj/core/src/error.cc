#include "srgov/error.h"

namespace srgov {

std::string_view ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSingularMatrix: return "SingularMatrix";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kGimbalLock: return "GimbalLock";
    case ErrorCode::kDegenerateDirection: return "DegenerateDirection";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kModelNotLoaded: return "ModelNotLoaded";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(ToString(code)) + ": " + what),
      code_(code) {}

void Throw(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace srgov
