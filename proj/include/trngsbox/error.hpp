#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trngsbox {

enum class ErrorCode {
  MalformedLine,
  InsufficientRecords,
  InsufficientBits,
  UnknownTest,
  WrongLength,
  NotBijective,
  ParseError,
  ExhaustedDirections,
  StepBudgetExceeded,
  InvalidTotal,
  InvalidConfig,
  EmptyAfterFilter,
  LengthMismatch,
  DimensionMismatch,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace trngsbox
