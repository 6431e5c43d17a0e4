#pragma once

#include <optional>

#include "kerr/common.hpp"

namespace kerr {

/// Physical parameters of the driven-dissipative multimode Kerr cavity.
/// All rates are dimensionless in units of the reference field decay gamma0,
/// time in units of 1/gamma0. Supported mode counts: 1 and 3.
struct SystemParams {
  int n_modes = 3;
  rvec delta;      ///< per-mode detunings Delta_m = omega_m - omega_L
  rvec gamma;      ///< per-mode field decay rates, > 0
  double v0 = 0.0;       ///< two-body interaction strength
  double omega0 = 0.0;   ///< coherent drive amplitude
  int pumped_index = 2;  ///< 1-based index of the driven mode
  double n_th = 0.0;     ///< thermal occupancy of the bath

  // Derived by validate().
  double delta_d = 0.0;  ///< bare-cavity anharmonicity 2*D2 - (D1 + D3)
  bool harmonic = true;

  int pump() const { return pumped_index - 1; }  ///< 0-based pumped mode
};

/// Checks invariants, fills the derived fields and returns the normalized
/// parameter set. Throws SimError on violation.
SystemParams validate(SystemParams params);

/// Thermodynamic-limit scaling: V0 -> V0/N, Omega0 -> Omega0*sqrt(N); the
/// combination V0*Omega0^2 is invariant. n_scale > 0.
SystemParams td_scale(const SystemParams& params, double n_scale);

/// Convenience builder for the 3-mode detuning pattern
/// Delta = [D0 - dD/2 - s, D0, D0 - dD/2 + s], where s is half the bare
/// 1-3 mode spacing. The mean-field limit cycle rotates at
/// omega_LC = (Delta3 - Delta1)/2 = s for equal decay rates.
rvec detunings_from(double delta0, double half_spacing, double delta_d);

/// omega_LC implied by the bare mode spacing, (Delta3 - Delta1)/2.
double lc_frequency_bare(const SystemParams& params);

enum class Frame { laser, local_oscillator };

/// Rotating-frame descriptor for spectra. In the local-oscillator frame the
/// limit-cycle carrier is removed; converting to the laser frame shifts
/// mode-1/3 (and m+-/-) spectra by -/+ omega_lc and leaves mode 2 alone.
struct FrameSpec {
  Frame frame = Frame::laser;
  double omega_lc = 0.0;
};

/// Interaction drift of the mean-field equations, derived once from the
/// commutators of the Hamiltonian:
///   i d(alpha_m)/dt |_int = V0 (sum_n |alpha_n|^2) alpha_m + exchange_m
/// with exchange_1 = V0 conj(a3) a2^2, exchange_2 = 2 V0 conj(a2) a1 a3,
/// exchange_3 = V0 conj(a1) a2^2 (three-mode case only).
cvec interaction_drift(const cvec& alpha, double v0);

/// Wirtinger derivatives of the full complex drift f_m (see meanfield):
/// a(m,k) = d f_m / d alpha_k, b(m,k) = d f_m / d conj(alpha_k).
struct WirtingerJacobian {
  cmat a;
  cmat b;
};

/// Params for the frame co-rotating with a limit cycle of frequency
/// omega_lc: Delta1 += omega_lc, Delta3 -= omega_lc. The LC orbit becomes a
/// genuine fixed point of the transformed equations.
SystemParams corotating_params(const SystemParams& params, double omega_lc);

}  // namespace kerr
