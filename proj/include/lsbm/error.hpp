#ifndef LSBM_ERROR_HPP
#define LSBM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lsbm {

enum class ErrorCode {
  NonStochastic,
  AsymmetricQ,
  BadPi,
  SignalTooLarge,
  DimensionMismatch,
  IndexOutOfRange,
  DegenerateParams,
  ConvergenceFailure,
  RankDeficient,
  LogOfZero,
  SpanViolation,
  KTooLarge,
  IoError,
  ConfigError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonStochastic:     return "NON_STOCHASTIC";
    case ErrorCode::AsymmetricQ:       return "ASYMMETRIC_Q";
    case ErrorCode::BadPi:             return "BAD_PI";
    case ErrorCode::SignalTooLarge:    return "SIGNAL_TOO_LARGE";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::IndexOutOfRange:   return "INDEX_OUT_OF_RANGE";
    case ErrorCode::DegenerateParams:  return "DEGENERATE_PARAMS";
    case ErrorCode::ConvergenceFailure:return "CONVERGENCE_FAILURE";
    case ErrorCode::RankDeficient:     return "RANK_DEFICIENT";
    case ErrorCode::LogOfZero:         return "LOG_OF_ZERO";
    case ErrorCode::SpanViolation:     return "SPAN_VIOLATION";
    case ErrorCode::KTooLarge:         return "K_TOO_LARGE";
    case ErrorCode::IoError:           return "IO_ERROR";
    case ErrorCode::ConfigError:       return "CONFIG_ERROR";
  }
  return "UNKNOWN";
}

/// All recoverable failures in the library throw this; code() identifies the
/// contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lsbm

#endif  // LSBM_ERROR_HPP
