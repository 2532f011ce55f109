// Error taxonomy shared by the fitting, scanning and I/O layers.
#pragma once

#include <stdexcept>
#include <string>

namespace episcan {

enum class ErrorCode {
  InvalidInput,      // bad arguments / shapes / ranges
  InvalidResponse,   // outcome values incompatible with the model family
  SingularDesign,    // X'X or Fisher information not invertible
  SingularInformation,
  NoInformation,     // zero-variance covariate columns (Cox)
  NoEvents,          // survival data without any observed event
  DegenerateVariance,
  InvalidRange,      // simulation parameter out of range
  ParseError,        // malformed input file
  AlignmentError,    // row counts disagree across files
  ConfigError        // unknown key, missing flag, bad value
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_error(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace episcan
