#pragma once

#include <stdexcept>
#include <string>

namespace k3h {

// Stable numeric values: the C API returns these directly.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kDimensionMismatch = 2,
  kNotIsometry = 3,
  kNoIntegralFixedNullVector = 4,
  kNonParabolicInput = 5,
  kXiNotOrthogonalToE = 6,
  kNonPositiveVector = 7,
  kMaxLettersExceeded = 8,
  kNotReducible = 9,
  kDegenerateFiber = 10,
  kBitGuardExceeded = 11,
  kNotOnSurface = 12,
  kNonConvergedSamples = 13,
  kParseError = 14,
  kIoError = 15,
  kInternal = 99,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace k3h
