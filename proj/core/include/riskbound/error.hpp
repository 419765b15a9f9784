#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace riskbound {

enum class ErrorCode {
  UnknownFamily,
  ParamOutOfDomain,
  ModeContractViolation,
  BadTruncationPoint,
  DomainError,
  NonFiniteValue,
  NoSignChange,
  NoAnalyticForm,
  NonInvertibleWeight,
  DegenerateResult,
  NonConvergent,
  BoundViolated,
  FileNotFound,
  MalformedCsv,
  NonNumericCell,
  EmptySeries,
  TooFewObservations,
  InvalidArgument,
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

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace riskbound
