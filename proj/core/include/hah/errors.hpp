#pragma once

#include <stdexcept>
#include <string>

namespace hah {

enum class ErrorCode {
  DegreeOutOfCap,
  InvalidArgument,
  MixedPresentation,
  InvalidDerivation,
  InvalidComplex,
  NotACycle,
  NotACoderivation,
  NotStrict,
  NotAModPCycle,
  HypothesisFails,
  HypothesisViolation,
  OutOfRange,
  // Raised when a solve that the theory guarantees comes back empty.
  TheoryViolation,
  IterationBoundExceeded,
  Obstructed,
  ParseError,
  ValidationError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace hah
