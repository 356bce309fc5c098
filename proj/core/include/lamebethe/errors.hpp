#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lamebethe {

enum class ErrorCode {
  InvalidInput,
  NonAdmissible,
  ResourceLimit,
  SingularConfiguration,
  NotClassicalCase,
  ConvergenceFailure,
  NotCritical,
  InvariantViolation,
  OffDiagonalViolation,
  IrregularSingularity,
  ZeroInput,
  NotASolution,
  FlagViolation,
  PathThroughSingularity,
  IdentityViolation,
  ExponentMismatch,
  BoundViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` tells callers (and the
/// CLI exit-code mapping) what went wrong.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace lamebethe
