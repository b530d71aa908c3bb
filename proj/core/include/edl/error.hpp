#pragma once

#include <stdexcept>
#include <string>

namespace edl {

enum class ErrorCode {
  ParameterMismatch,
  NonUnit,
  NonzeroTrace,
  BudgetExceeded,
  NonSplit,
  LevelTooLow,
  NotExtendable,
  NonIntegral,
  UnsupportedConnectedComponent,
  CheckFailed,
  InvalidArgument,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace edl
