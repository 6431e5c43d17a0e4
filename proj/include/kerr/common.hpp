#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace kerr {

using complex = std::complex<double>;
using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;
using rvec = Eigen::VectorXd;
using rmat = Eigen::MatrixXd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr complex ii{0.0, 1.0};

enum class ErrorCode {
  NonPositiveDecay,
  BadPumpIndex,
  NegativeThermalOccupancy,
  NonPositiveScale,
  BadConfig,
  StepSizeUnderflow,
  NonFiniteState,
  NoConvergence,
  TrajectoryTooShort,
  NotInLCPhase,
  FrameMismatch,
  SingularAtOmega,
  NonUnitaryBasis,
  InsufficientSamples,
  EmptyGrid,
  NotStationary,
  DimensionOverflow,
  DegenerateNullSpace,
  EigsNoConvergence,
  NormUnderflow,
  NonUniformGrid,
  FitDiverged,
  PeakAtBoundary,
  NonPositiveEnvelope,
  IoError,
};

const char* error_code_name(ErrorCode c);

/// Exception carrying a machine-readable error code alongside the message.
class SimError : public std::runtime_error {
 public:
  SimError(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline bool all_finite(const cvec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  }
  return true;
}

}  // namespace kerr
