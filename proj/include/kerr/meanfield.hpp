#pragma once

#include <optional>

#include "kerr/model.hpp"
#include "kerr/ode.hpp"

namespace kerr {
namespace meanfield {

/// Complex drift of the driven-dissipative Gross-Pitaevskii equation,
///   d alpha_m/dt = -i [ (Delta_m - i gamma_m) alpha_m
///                       + V0 (sum_n |alpha_n|^2) alpha_m + exchange_m
///                       + Omega0 delta_{m,p} ].
cvec gpe_drift(const cvec& alpha, const SystemParams& params);

/// Wirtinger derivatives of gpe_drift: a(m,k) = df_m/dalpha_k,
/// b(m,k) = df_m/dconj(alpha_k).
WirtingerJacobian gpe_wirtinger(const cvec& alpha, const SystemParams& params);

/// Real 2N x 2N Jacobian in (Re alpha_1, Im alpha_1, ...) coordinates.
rmat jacobian(const cvec& alpha, const SystemParams& params);

/// Eigenvalues of the real Jacobian, sorted by descending real part.
cvec jacobian_eigenvalues(const cvec& alpha, const SystemParams& params);

struct MeanFieldTrajectory {
  rvec t;
  cmat alpha;  ///< n_out x n_modes
};

/// Adaptive integration of the GPE sampled on a uniform grid.
MeanFieldTrajectory integrate(const cvec& alpha0, const SystemParams& params, double t_final,
                              int n_out = 2001, const OdeOptions& opts = {});

struct FixedPoint {
  cvec alpha;
  cvec jacobian_eigs;   ///< sorted by descending real part
  bool stable = false;  ///< max Re(eig) < -stability_tol, kernel modes excluded
  bool has_kernel = false;  ///< a |eig| < kernel_tol neutral mode is present
  double residual = 0.0;    ///< ||gpe_drift|| at alpha
  double basin_weight = 0.0;
};

struct FixedPointOptions {
  int n_seeds = 64;
  double t_relax = 80.0;
  double seed_scale = 0.0;  ///< 0: auto = 3x linear-cavity amplitude estimate
  double newton_tol = 1e-11;
  int newton_max_iter = 60;
  double cluster_radius = 1e-4;
  double stability_tol = 1e-9;
  double kernel_tol = 1e-8;
};

/// Multi-seed fixed-point census: relax from random Gaussian seeds, polish
/// with a least-squares Newton iteration, cluster, and classify stability.
/// Deterministic for a given rng seed. Seeds that fail to converge are
/// counted, not fatal.
struct FixedPointCensus {
  std::vector<FixedPoint> points;
  int n_failed = 0;
};
FixedPointCensus find_fixed_points(const SystemParams& params, int n_seeds,
                                   std::uint64_t rng_seed, FixedPointOptions opts = {});

/// Newton polish of a single fixed-point candidate (least-squares step, so
/// gauge-degenerate fixed-point circles are handled). Returns std::nullopt
/// when the iteration does not reach newton_tol.
std::optional<FixedPoint> polish_fixed_point(const cvec& guess, const SystemParams& params,
                                             const FixedPointOptions& opts = {});

struct LimitCycle {
  double period = 0.0;
  double omega_lc = 0.0;
  std::vector<int> oscillating_modes;  ///< 0-based
  rvec mean_amplitudes;                ///< time-averaged |alpha_m|
};

struct LimitCycleOptions {
  double transient_fraction = 0.5;  ///< discarded fraction when transient_cut < 0
  double amplitude_floor = 1e-6;    ///< relative oscillation threshold
};

/// Detects a periodic orbit in a mean-field trajectory from the
/// autocorrelation of the oscillating quadrature of mode 1 (mode 0 for the
/// single-mode system), with sub-sample quadratic peak interpolation.
/// Returns std::nullopt for stationary trajectories.
std::optional<LimitCycle> detect_limit_cycle(const MeanFieldTrajectory& traj,
                                             double transient_cut = -1.0,
                                             const LimitCycleOptions& opts = {});

enum class Phase { A, B, C };

struct PhaseCell {
  double x = 0.0, y = 0.0;
  int n_stable_fp = 0;  ///< stable attractors for the pumped mode (LC included)
  Phase phase = Phase::A;
  bool lc_present = false;
  bool converged = true;
};

enum class SweepAxis { v0, delta0, omega0, delta_d };

struct SweepGrid {
  SweepAxis x_axis = SweepAxis::omega0;
  rvec x_values;
  SweepAxis y_axis = SweepAxis::v0;
  rvec y_values;
};

SystemParams apply_axis(const SystemParams& base, SweepAxis axis, double value);

/// Attractor census over a 2D parameter grid. Cells are independent work
/// units; deterministic for a given master seed regardless of worker count.
std::vector<PhaseCell> phase_diagram(const SystemParams& base, const SweepGrid& grid,
                                     int n_seeds, std::uint64_t master_seed);

/// Attractor census at a single parameter point (used by phase_diagram).
PhaseCell classify_cell(const SystemParams& params, int n_seeds, std::uint64_t cell_seed);

struct CubicSolution {
  std::vector<double> roots;         ///< real non-negative photon numbers
  std::vector<bool> stable;          ///< (V0 n + D0)(3 V0 n + D0) >= 0
  double discriminant = 0.0;
};

/// Exact mean photon number(s) of the single-mode cavity at gamma0 = 1:
/// V0^2 n^3 + 2 D0 V0 n^2 + (D0^2 + 1) n = Omega0^2, with its discriminant
/// and the analytic stability flags.
CubicSolution single_mode_cubic(double v0, double delta0, double omega0);

struct PolarResiduals {
  double amplitude_ratio = 0.0;  ///< |a1|^2/|a3|^2 - gamma3/gamma1
  double sin_phi0 = 0.0;         ///< sin(Phi0) - sqrt(g1 g3)/(V0 |a2|^2)
  double drive_balance = 0.0;    ///< Omega0 sin(phi2) + g2 r2 + 2 V0 r1 r2 r3 sin(Phi0)
  double omega_lc_mismatch = 0.0;
};

/// Residuals of the polar steady-state relations at a converged 3-mode
/// fixed point of the co-rotating frame. detected_omega_lc < 0 skips the
/// frequency cross-check.
PolarResiduals polar_relations_residual(const FixedPoint& fp, const SystemParams& params,
                                        double detected_omega_lc = -1.0);

/// Relaxes to the limit-cycle orbit and polishes it into a fixed point of
/// the co-rotating frame. Returns the fixed point together with the frame
/// parameters used. Throws NotInLCPhase when no cycle is found.
struct LCFixedPoint {
  FixedPoint fp;
  SystemParams frame_params;
  double omega_lc = 0.0;
};
LCFixedPoint lc_fixed_point(const SystemParams& params, std::uint64_t rng_seed = 7,
                            double t_relax = 300.0);

}  // namespace meanfield
}  // namespace kerr
