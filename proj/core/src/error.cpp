#include "superhedge/error.hpp"

namespace superhedge {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kDimensionError: return "DimensionError";
    case ErrorCode::kNonInada: return "NonInada";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kNoPositiveRegion: return "NoPositiveRegion";
    case ErrorCode::kPreconditionError: return "PreconditionError";
    case ErrorCode::kNoMeasure: return "NoMeasure";
    case ErrorCode::kEmptyMeasureSet: return "EmptyMeasureSet";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kInfeasible: return "Infeasible";
  }
  return "Unknown";
}

}  // namespace superhedge
