#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fsi {

enum class ErrorCode {
  InvalidArgument,
  InvalidModel,
  RadiusOutOfRange,
  NuNotContractive,
  NotCertified,
  MaxIterExceeded,
  ConditionFails,
  EvaluationFailed,
  JacobianMissing,
  CertificateMissing,
  UnknownFixture,
  BadParameters,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fsi
