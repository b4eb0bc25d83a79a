#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace srgov {

/// Failure categories raised by the library. Every thrown srgov::Error
/// carries exactly one of these.
enum class ErrorCode {
  kSingularMatrix,
  kNotPositiveDefinite,
  kNotSymmetric,
  kNoConvergence,
  kNonFinite,
  kGimbalLock,
  kDegenerateDirection,
  kPreconditionViolated,
  kModelNotLoaded,
  kIoError,
  kSchemaMismatch,
  kConfigError,
  kInvalidArgument,
};

std::string_view ToString(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void Throw(ErrorCode code, const std::string& what);

}  // namespace srgov
