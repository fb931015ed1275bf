#include "trngsbox/error.hpp"

namespace trngsbox {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::InsufficientRecords: return "InsufficientRecords";
    case ErrorCode::InsufficientBits: return "InsufficientBits";
    case ErrorCode::UnknownTest: return "UnknownTest";
    case ErrorCode::WrongLength: return "WrongLength";
    case ErrorCode::NotBijective: return "NotBijective";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ExhaustedDirections: return "ExhaustedDirections";
    case ErrorCode::StepBudgetExceeded: return "StepBudgetExceeded";
    case ErrorCode::InvalidTotal: return "InvalidTotal";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyAfterFilter: return "EmptyAfterFilter";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace trngsbox
