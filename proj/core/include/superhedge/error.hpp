#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace superhedge {

// Machine-readable error codes. The CLI prints these verbatim.
enum class ErrorCode {
  kParseError,
  kValidationError,
  kDimensionError,
  kNonInada,
  kDomainError,
  kNoPositiveRegion,
  kPreconditionError,
  kNoMeasure,
  kEmptyMeasureSet,
  kUnbounded,
  kInfeasible,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace superhedge
