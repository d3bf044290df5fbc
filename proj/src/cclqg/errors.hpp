#pragma once

#include <stdexcept>
#include <string>

namespace cclqg {

enum class ErrorCode : int {
  Ok = 0,
  InvalidArgument = 1,
  NotSymmetric = 2,
  NotPsd = 3,
  NotPositiveDefinite = 4,
  Unstable = 5,
  NoConvergence = 6,
  SingularInnovation = 7,
  DimensionMismatch = 8,
  InconsistentGroups = 9,
  ConditionViolated = 10,
  StepOutOfRange = 11,
  ParseError = 12,
  IoError = 13,
  NullPointer = 14,
  Internal = 15,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Ok: return "ok";
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::NotSymmetric: return "not symmetric";
    case ErrorCode::NotPsd: return "not positive semidefinite";
    case ErrorCode::NotPositiveDefinite: return "not positive definite";
    case ErrorCode::Unstable: return "unstable";
    case ErrorCode::NoConvergence: return "no convergence";
    case ErrorCode::SingularInnovation: return "singular innovation";
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::InconsistentGroups: return "inconsistent groups";
    case ErrorCode::ConditionViolated: return "condition violated";
    case ErrorCode::StepOutOfRange: return "step out of range";
    case ErrorCode::ParseError: return "parse error";
    case ErrorCode::IoError: return "io error";
    case ErrorCode::NullPointer: return "null pointer";
    case ErrorCode::Internal: return "internal error";
  }
  return "unknown";
}

}  // namespace cclqg
