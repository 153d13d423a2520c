#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vetotalk {

enum class ErrorCode {
  kDimensionMismatch,
  kRowMismatch,
  kDecisionOutsideX,
  kV0TooHigh,
  kEmptySubset,
  kTooManyTypes,
  kValidation,
  kParse,
  kMessageUndefined,
  kWrongTypeCount,
  kNotAPartition,
  kNotOneDimensional,
  kNotPrivateValues,
  kWrongClassification,
  kBisectionBudgetExceeded,
  kNotAnEquilibrium,
  kNoPartitionalEquilibrium,
  kInternal,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kRowMismatch: return "RowMismatch";
    case ErrorCode::kDecisionOutsideX: return "DecisionOutsideX";
    case ErrorCode::kV0TooHigh: return "V0TooHigh";
    case ErrorCode::kEmptySubset: return "EmptySubset";
    case ErrorCode::kTooManyTypes: return "TooManyTypes";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kMessageUndefined: return "MessageUndefined";
    case ErrorCode::kWrongTypeCount: return "WrongTypeCount";
    case ErrorCode::kNotAPartition: return "NotAPartition";
    case ErrorCode::kNotOneDimensional: return "NotOneDimensional";
    case ErrorCode::kNotPrivateValues: return "NotPrivateValues";
    case ErrorCode::kWrongClassification: return "WrongClassification";
    case ErrorCode::kBisectionBudgetExceeded: return "BisectionBudgetExceeded";
    case ErrorCode::kNotAnEquilibrium: return "NotAnEquilibrium";
    case ErrorCode::kNoPartitionalEquilibrium: return "NoPartitionalEquilibrium";
    case ErrorCode::kInternal: return "InternalError";
  }
  return "Unknown";
}

// Every failure surfaced by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vetotalk
