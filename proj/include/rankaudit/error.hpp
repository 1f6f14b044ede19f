#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rankaudit {

enum class ErrorCode {
  kSchemaMismatch,
  kInvalidSchema,
  kInvalidDataset,
  kMalformedRanking,
  kInvalidScore,
  kNonMonotoneSchedule,
  kRangeError,
  kBoundExceedsK,
  kUndefinedBound,
  kNonPositiveAlpha,
  kInvalidThreshold,
  kWrongMode,
  kCacheCoherence,
  kUndefinedSchedule,
  kTooLarge,
  kModeUnsupported,
  kEmptyGroup,
  kParameter,
  kMissingColumn,
  kNonNumeric,
  kNoRanking,
  kMalformedCsv,
  kMalformedReport,
  kMalformedConfig,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

// Every library failure is reported through this type; the code lets callers
// (and the CLI exit-code mapping) tell the failure classes apart.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rankaudit
