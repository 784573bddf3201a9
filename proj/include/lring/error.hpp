#pragma once

#include <stdexcept>
#include <string>

namespace lring {

enum class ErrorCode {
  InvalidElement,
  InvalidSpace,
  EmptyInput,
  NotBounded,
  NotAdditiveOnCone,
  DecompositionPrereqViolated,
  OracleTooLarge,
  NotBoundedAbove,
  InvalidNeighborhood,
  VacuousProduct,
  SoundnessBug,
  Unsupported,
  UnknownCase,
  EmptyRegistry,
  UnknownInstance,
  InvalidArgument,
  UnknownName,
  ParseError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidElement: return "InvalidElement";
    case ErrorCode::InvalidSpace: return "InvalidSpace";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NotBounded: return "NotBounded";
    case ErrorCode::NotAdditiveOnCone: return "NotAdditiveOnCone";
    case ErrorCode::DecompositionPrereqViolated: return "DecompositionPrereqViolated";
    case ErrorCode::OracleTooLarge: return "OracleTooLarge";
    case ErrorCode::NotBoundedAbove: return "NotBoundedAbove";
    case ErrorCode::InvalidNeighborhood: return "InvalidNeighborhood";
    case ErrorCode::VacuousProduct: return "VacuousProduct";
    case ErrorCode::SoundnessBug: return "SoundnessBug";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::UnknownCase: return "UnknownCase";
    case ErrorCode::EmptyRegistry: return "EmptyRegistry";
    case ErrorCode::UnknownInstance: return "UnknownInstance";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure the library reports carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lring
