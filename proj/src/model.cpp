#include "kerr/model.hpp"

#include <cmath>

namespace kerr {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonPositiveDecay: return "NonPositiveDecay";
    case ErrorCode::BadPumpIndex: return "BadPumpIndex";
    case ErrorCode::NegativeThermalOccupancy: return "NegativeThermalOccupancy";
    case ErrorCode::NonPositiveScale: return "NonPositiveScale";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::TrajectoryTooShort: return "TrajectoryTooShort";
    case ErrorCode::NotInLCPhase: return "NotInLCPhase";
    case ErrorCode::FrameMismatch: return "FrameMismatch";
    case ErrorCode::SingularAtOmega: return "SingularAtOmega";
    case ErrorCode::NonUnitaryBasis: return "NonUnitaryBasis";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::NotStationary: return "NotStationary";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::DegenerateNullSpace: return "DegenerateNullSpace";
    case ErrorCode::EigsNoConvergence: return "EigsNoConvergence";
    case ErrorCode::NormUnderflow: return "NormUnderflow";
    case ErrorCode::NonUniformGrid: return "NonUniformGrid";
    case ErrorCode::FitDiverged: return "FitDiverged";
    case ErrorCode::PeakAtBoundary: return "PeakAtBoundary";
    case ErrorCode::NonPositiveEnvelope: return "NonPositiveEnvelope";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

SystemParams validate(SystemParams p) {
  if (p.n_modes != 1 && p.n_modes != 3)
    throw SimError(ErrorCode::BadConfig, "n_modes must be 1 or 3");
  if (p.delta.size() != p.n_modes)
    throw SimError(ErrorCode::BadConfig, "delta must have one entry per mode");
  if (p.gamma.size() != p.n_modes)
    throw SimError(ErrorCode::BadConfig, "gamma must have one entry per mode");
  for (int m = 0; m < p.n_modes; ++m) {
    if (!(p.gamma[m] > 0.0))
      throw SimError(ErrorCode::NonPositiveDecay, "gamma[" + std::to_string(m + 1) + "] must be > 0");
  }
  if (p.pumped_index < 1 || p.pumped_index > p.n_modes)
    throw SimError(ErrorCode::BadPumpIndex, "pumped_index out of range");
  if (p.n_th < 0.0)
    throw SimError(ErrorCode::NegativeThermalOccupancy, "n_th must be >= 0");
  if (p.v0 < 0.0)
    throw SimError(ErrorCode::BadConfig, "v0 must be >= 0 (repulsive interaction)");

  if (p.n_modes == 3) {
    p.delta_d = 2.0 * p.delta[1] - (p.delta[0] + p.delta[2]);
  } else {
    p.delta_d = 0.0;
  }
  p.harmonic = std::abs(p.delta_d) < 1e-12;
  return p;
}

SystemParams td_scale(const SystemParams& params, double n_scale) {
  if (!(n_scale > 0.0))
    throw SimError(ErrorCode::NonPositiveScale, "thermodynamic scale must be > 0");
  SystemParams out = params;
  out.v0 = params.v0 / n_scale;
  out.omega0 = params.omega0 * std::sqrt(n_scale);
  return out;
}

rvec detunings_from(double delta0, double half_spacing, double delta_d) {
  rvec d(3);
  d[0] = delta0 - 0.5 * delta_d - half_spacing;
  d[1] = delta0;
  d[2] = delta0 - 0.5 * delta_d + half_spacing;
  return d;
}

double lc_frequency_bare(const SystemParams& params) {
  if (params.n_modes != 3) return 0.0;
  return 0.5 * (params.delta[2] - params.delta[0]);
}

cvec interaction_drift(const cvec& alpha, double v0) {
  const auto n = alpha.size();
  cvec out = cvec::Zero(n);
  if (v0 == 0.0) return out;
  const double total = alpha.squaredNorm();
  for (Eigen::Index m = 0; m < n; ++m) out[m] = v0 * total * alpha[m];
  if (n == 3) {
    out[0] += v0 * std::conj(alpha[2]) * alpha[1] * alpha[1];
    out[1] += 2.0 * v0 * std::conj(alpha[1]) * alpha[0] * alpha[2];
    out[2] += v0 * std::conj(alpha[0]) * alpha[1] * alpha[1];
  }
  return out;
}

SystemParams corotating_params(const SystemParams& params, double omega_lc) {
  if (params.n_modes != 3)
    throw SimError(ErrorCode::BadConfig, "co-rotating frame requires 3 modes");
  SystemParams out = params;
  out.delta[0] += omega_lc;
  out.delta[2] -= omega_lc;
  return validate(out);
}

}  // namespace kerr
