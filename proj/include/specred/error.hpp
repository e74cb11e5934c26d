#pragma once

#include <stdexcept>
#include <string>

namespace specred {

enum class ErrorCode {
  ZeroDenominator,
  DivisionByZeroFunction,
  EvaluationAtPole,
  NotProper,
  IllConditionedRoots,
  DimensionMismatch,
  SingularOverFunctionField,
  EmptySubset,
  UnknownLabel,
  FrameNotOrthonormal,
  SubsetViolation,
  NotAnEigenpair,
  BruteForceTooLarge,
  NotNormalF,
  NotEquitable,
  DisconnectedGraph,
  InvalidPattern,
  DivisorMismatch,
  NotHermitian,
  NotHermitianFeasible,
  ConstantPartNotHollow,
  NotRealSymmetric,
  SingularQ,
  NotAUnitaryCompletion,
  SingularTransform,
  ReductionsDiffer,
  ParseError,
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::DivisionByZeroFunction: return "DivisionByZeroFunction";
    case ErrorCode::EvaluationAtPole: return "EvaluationAtPole";
    case ErrorCode::NotProper: return "NotProper";
    case ErrorCode::IllConditionedRoots: return "IllConditionedRoots";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularOverFunctionField: return "SingularOverFunctionField";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::FrameNotOrthonormal: return "FrameNotOrthonormal";
    case ErrorCode::SubsetViolation: return "SubsetViolation";
    case ErrorCode::NotAnEigenpair: return "NotAnEigenpair";
    case ErrorCode::BruteForceTooLarge: return "BruteForceTooLarge";
    case ErrorCode::NotNormalF: return "NotNormalF";
    case ErrorCode::NotEquitable: return "NotEquitable";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::InvalidPattern: return "InvalidPattern";
    case ErrorCode::DivisorMismatch: return "DivisorMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotHermitianFeasible: return "NotHermitianFeasible";
    case ErrorCode::ConstantPartNotHollow: return "ConstantPartNotHollow";
    case ErrorCode::NotRealSymmetric: return "NotRealSymmetric";
    case ErrorCode::SingularQ: return "SingularQ";
    case ErrorCode::NotAUnitaryCompletion: return "NotAUnitaryCompletion";
    case ErrorCode::SingularTransform: return "SingularTransform";
    case ErrorCode::ReductionsDiffer: return "ReductionsDiffer";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace specred
