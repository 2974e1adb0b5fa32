#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace wfl {

enum class ErrorCode {
  DimMismatch,
  ShapeMismatch,
  BadShape,
  BadInput,
  NotHermitian,
  NotPositiveDefinite,
  NotAFrame,
  NotWovenAtPartition,
  NotWoven,
  TooLarge,
  NoFreedom,
  NotParsevalWeaving,
  NotTightWeaving,
  InvalidDual,
  GenerationFailed,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::BadShape: return "BadShape";
    case ErrorCode::BadInput: return "BadInput";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotAFrame: return "NotAFrame";
    case ErrorCode::NotWovenAtPartition: return "NotWovenAtPartition";
    case ErrorCode::NotWoven: return "NotWoven";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NoFreedom: return "NoFreedom";
    case ErrorCode::NotParsevalWeaving: return "NotParsevalWeaving";
    case ErrorCode::NotTightWeaving: return "NotTightWeaving";
    case ErrorCode::InvalidDual: return "InvalidDual";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
  }
  return "Unknown";
}

/// Library error. `witness()` carries the partition bits for the
/// weaving failures (NotWoven, NotWovenAtPartition).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::uint64_t> witness = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        witness_(witness) {}

  ErrorCode code() const noexcept { return code_; }
  const std::optional<std::uint64_t>& witness() const noexcept { return witness_; }

 private:
  ErrorCode code_;
  std::optional<std::uint64_t> witness_;
};

}  // namespace wfl
