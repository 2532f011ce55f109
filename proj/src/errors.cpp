#include "episcan/errors.hpp"

namespace episcan {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput:
      return "InvalidInput";
    case ErrorCode::InvalidResponse:
      return "InvalidResponse";
    case ErrorCode::SingularDesign:
      return "SingularDesign";
    case ErrorCode::SingularInformation:
      return "SingularInformation";
    case ErrorCode::NoInformation:
      return "NoInformation";
    case ErrorCode::NoEvents:
      return "NoEvents";
    case ErrorCode::DegenerateVariance:
      return "DegenerateVariance";
    case ErrorCode::InvalidRange:
      return "InvalidRange";
    case ErrorCode::ParseError:
      return "ParseError";
    case ErrorCode::AlignmentError:
      return "AlignmentError";
    case ErrorCode::ConfigError:
      return "ConfigError";
  }
  return "UnknownError";
}

}  // namespace episcan
