#include "fsi/error.hpp"

namespace fsi {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::RadiusOutOfRange: return "RadiusOutOfRange";
    case ErrorCode::NuNotContractive: return "NuNotContractive";
    case ErrorCode::NotCertified: return "NotCertified";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::ConditionFails: return "ConditionFails";
    case ErrorCode::EvaluationFailed: return "EvaluationFailed";
    case ErrorCode::JacobianMissing: return "JacobianMissing";
    case ErrorCode::CertificateMissing: return "CertificateMissing";
    case ErrorCode::UnknownFixture: return "UnknownFixture";
    case ErrorCode::BadParameters: return "BadParameters";
  }
  return "Unknown";
}

}  // namespace fsi
