#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace parlap {

enum class ErrorCode {
  NonPositiveWeight,
  SelfLoop,
  VertexOutOfRange,
  DimensionMismatch,
  SingularBlock,
  KernelMismatch,
  Disconnected,
  DisconnectedSubsample,
  WalkCapExceeded,
  NotFiveDD,
  OracleTooLarge,
  InvalidConfig,
  Parse,
  Io,
  RetriesExhausted,
  Internal,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularBlock: return "SingularBlock";
    case ErrorCode::KernelMismatch: return "KernelMismatch";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::DisconnectedSubsample: return "DisconnectedSubsample";
    case ErrorCode::WalkCapExceeded: return "WalkCapExceeded";
    case ErrorCode::NotFiveDD: return "NotFiveDD";
    case ErrorCode::OracleTooLarge: return "OracleTooLarge";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
    case ErrorCode::RetriesExhausted: return "RetriesExhausted";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

/// Numerical failures are the ones a fresh random seed may fix; everything
/// else is a problem with the input or the configuration.
constexpr bool is_numerical(ErrorCode code) noexcept {
  return code == ErrorCode::WalkCapExceeded || code == ErrorCode::RetriesExhausted ||
         code == ErrorCode::SingularBlock || code == ErrorCode::Internal;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace parlap
