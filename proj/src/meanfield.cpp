#include "kerr/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "kerr/rng.hpp"

namespace kerr {
namespace meanfield {

cvec gpe_drift(const cvec& alpha, const SystemParams& p) {
  cvec rhs = interaction_drift(alpha, p.v0);
  for (int m = 0; m < p.n_modes; ++m) {
    rhs[m] += (p.delta[m] - ii * p.gamma[m]) * alpha[m];
  }
  rhs[p.pump()] += p.omega0;
  return -ii * rhs;
}

WirtingerJacobian gpe_wirtinger(const cvec& alpha, const SystemParams& p) {
  const int n = p.n_modes;
  WirtingerJacobian j;
  j.a = cmat::Zero(n, n);
  j.b = cmat::Zero(n, n);
  const double total = alpha.squaredNorm();
  for (int m = 0; m < n; ++m) {
    j.a(m, m) = (p.delta[m] - ii * p.gamma[m]) + p.v0 * (total + std::norm(alpha[m]));
    j.b(m, m) = p.v0 * alpha[m] * alpha[m];
    for (int k = 0; k < n; ++k) {
      if (k == m) continue;
      j.a(m, k) = p.v0 * std::conj(alpha[k]) * alpha[m];
      j.b(m, k) = p.v0 * alpha[k] * alpha[m];
    }
  }
  if (n == 3) {
    j.a(0, 1) += 2.0 * p.v0 * std::conj(alpha[2]) * alpha[1];
    j.b(0, 2) += p.v0 * alpha[1] * alpha[1];
    j.a(1, 0) += 2.0 * p.v0 * std::conj(alpha[1]) * alpha[2];
    j.a(1, 2) += 2.0 * p.v0 * std::conj(alpha[1]) * alpha[0];
    j.b(1, 1) += 2.0 * p.v0 * alpha[0] * alpha[2];
    j.a(2, 1) += 2.0 * p.v0 * std::conj(alpha[0]) * alpha[1];
    j.b(2, 0) += p.v0 * alpha[1] * alpha[1];
  }
  j.a *= -ii;
  j.b *= -ii;
  return j;
}

rmat jacobian(const cvec& alpha, const SystemParams& p) {
  const int n = p.n_modes;
  const WirtingerJacobian w = gpe_wirtinger(alpha, p);
  rmat jac(2 * n, 2 * n);
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) {
      const complex s = w.a(m, k) + w.b(m, k);
      const complex d = w.a(m, k) - w.b(m, k);
      jac(2 * m, 2 * k) = s.real();
      jac(2 * m, 2 * k + 1) = -d.imag();
      jac(2 * m + 1, 2 * k) = s.imag();
      jac(2 * m + 1, 2 * k + 1) = d.real();
    }
  }
  return jac;
}

namespace {

cvec sorted_by_real_desc(cvec v) {
  std::sort(v.data(), v.data() + v.size(),
            [](const complex& x, const complex& y) {
              if (x.real() != y.real()) return x.real() > y.real();
              return x.imag() > y.imag();
            });
  return v;
}

}  // namespace

cvec jacobian_eigenvalues(const cvec& alpha, const SystemParams& p) {
  Eigen::EigenSolver<rmat> es(jacobian(alpha, p), /*computeEigenvectors=*/false);
  return sorted_by_real_desc(es.eigenvalues());
}

MeanFieldTrajectory integrate(const cvec& alpha0, const SystemParams& p, double t_final,
                              int n_out, const OdeOptions& opts) {
  auto rhs = [&p](double, const cvec& y) { return gpe_drift(y, p); };
  OdeTrajectory traj = integrate_ode(rhs, alpha0, 0.0, t_final, n_out, opts);
  MeanFieldTrajectory out;
  out.t = traj.t;
  out.alpha.resize(n_out, p.n_modes);
  for (int i = 0; i < n_out; ++i) out.alpha.row(i) = traj.states[i].transpose();
  return out;
}

namespace {

void classify_stability(FixedPoint& fp, const FixedPointOptions& opts) {
  fp.has_kernel = false;
  double max_re = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < fp.jacobian_eigs.size(); ++i) {
    const complex lam = fp.jacobian_eigs[i];
    if (std::abs(lam) < opts.kernel_tol) {
      fp.has_kernel = true;
      continue;
    }
    max_re = std::max(max_re, lam.real());
  }
  fp.stable = !fp.has_kernel && max_re < -opts.stability_tol;
  // A gauge-degenerate fixed point is orbitally stable when every
  // non-kernel direction decays; keep that in `stable` for census users.
  if (fp.has_kernel && max_re < -opts.stability_tol) fp.stable = true;
}

}  // namespace

std::optional<FixedPoint> polish_fixed_point(const cvec& guess, const SystemParams& p,
                                             const FixedPointOptions& opts) {
  const int n = p.n_modes;
  cvec alpha = guess;
  for (int it = 0; it < opts.newton_max_iter; ++it) {
    const cvec f = gpe_drift(alpha, p);
    if (!all_finite(alpha)) return std::nullopt;
    const double res = f.norm();
    if (res < opts.newton_tol) {
      FixedPoint fp;
      fp.alpha = alpha;
      fp.residual = res;
      fp.jacobian_eigs = jacobian_eigenvalues(alpha, p);
      classify_stability(fp, opts);
      return fp;
    }
    rvec f_real(2 * n);
    for (int m = 0; m < n; ++m) {
      f_real[2 * m] = f[m].real();
      f_real[2 * m + 1] = f[m].imag();
    }
    // Least-squares Newton step: handles the singular Jacobian on
    // gauge-degenerate fixed-point circles.
    const rmat jac = jacobian(alpha, p);
    const rvec dx = jac.completeOrthogonalDecomposition().solve(-f_real);
    double lambda = 1.0;
    cvec next = alpha;
    for (int ls = 0; ls < 8; ++ls) {
      for (int m = 0; m < n; ++m) {
        next[m] = alpha[m] + lambda * complex(dx[2 * m], dx[2 * m + 1]);
      }
      if (gpe_drift(next, p).norm() < res) break;
      lambda *= 0.5;
    }
    alpha = next;
  }
  if (gpe_drift(alpha, p).norm() < opts.newton_tol) {
    return polish_fixed_point(alpha, p, opts);
  }
  return std::nullopt;
}

namespace {

double auto_seed_scale(const SystemParams& p) {
  const int pm = p.pump();
  const double lin = std::abs(p.omega0) /
                     std::abs(complex(p.delta[pm], -p.gamma[pm]));
  return 3.0 * std::max(lin, 0.3);
}

cvec random_seed_state(const SystemParams& p, RngStream& rng, double scale) {
  cvec a(p.n_modes);
  for (int m = 0; m < p.n_modes; ++m) a[m] = scale * rng.cnormal();
  return a;
}

}  // namespace

FixedPointCensus find_fixed_points(const SystemParams& p, int n_seeds, std::uint64_t rng_seed,
                                   FixedPointOptions opts) {
  if (n_seeds < 1) throw SimError(ErrorCode::BadConfig, "n_seeds must be >= 1");
  opts.n_seeds = n_seeds;
  const double scale = opts.seed_scale > 0.0 ? opts.seed_scale : auto_seed_scale(p);
  auto rhs = [&p](double, const cvec& y) { return gpe_drift(y, p); };

  OdeOptions ode;
  ode.rtol = 1e-8;
  ode.atol = 1e-10;

  FixedPointCensus census;
  std::vector<int> counts;
  for (int s = 0; s < n_seeds; ++s) {
    RngStream rng(rng_seed, static_cast<std::uint64_t>(s));
    cvec a0 = random_seed_state(p, rng, scale);
    std::optional<FixedPoint> fp;
    try {
      const cvec relaxed = integrate_to(rhs, a0, 0.0, opts.t_relax, ode);
      fp = polish_fixed_point(relaxed, p, opts);
    } catch (const SimError&) {
      fp = std::nullopt;
    }
    if (!fp) {
      ++census.n_failed;
      continue;
    }
    bool merged = false;
    for (std::size_t c = 0; c < census.points.size(); ++c) {
      if ((census.points[c].alpha - fp->alpha).norm() < opts.cluster_radius) {
        ++counts[c];
        merged = true;
        break;
      }
    }
    if (!merged) {
      census.points.push_back(std::move(*fp));
      counts.push_back(1);
    }
  }
  for (std::size_t c = 0; c < census.points.size(); ++c) {
    census.points[c].basin_weight = static_cast<double>(counts[c]) / n_seeds;
  }
  std::sort(census.points.begin(), census.points.end(),
            [](const FixedPoint& x, const FixedPoint& y) {
              return x.alpha.squaredNorm() < y.alpha.squaredNorm();
            });
  return census;
}

namespace {

struct Oscillation {
  double relative = 0.0;  ///< rms deviation over rms magnitude
  double decay = 0.0;     ///< second-half amplitude over first-half amplitude
};

Oscillation oscillation_measure(const Eigen::Ref<const cvec>& samples) {
  const auto k = samples.size();
  const complex mean = samples.mean();
  double dev = 0.0, mag = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    dev += std::norm(samples[i] - mean);
    mag += std::norm(samples[i]);
  }
  Oscillation o;
  o.relative = std::sqrt(dev / k) / std::max(std::sqrt(mag / k), 1e-300);
  double d1 = 0.0, d2 = 0.0;
  for (Eigen::Index i = 0; i < k / 2; ++i) d1 += std::norm(samples[i] - mean);
  for (Eigen::Index i = k / 2; i < k; ++i) d2 += std::norm(samples[i] - mean);
  o.decay = std::sqrt(d2 / std::max(d1, 1e-300));
  return o;
}

}  // namespace

std::optional<LimitCycle> detect_limit_cycle(const MeanFieldTrajectory& traj,
                                             double transient_cut, const LimitCycleOptions& opts) {
  const Eigen::Index total = traj.t.size();
  if (total < 32) throw SimError(ErrorCode::TrajectoryTooShort, "need at least 32 samples");
  const double dt = traj.t[1] - traj.t[0];
  Eigen::Index start;
  if (transient_cut < 0.0) {
    start = static_cast<Eigen::Index>(total * opts.transient_fraction);
  } else {
    start = static_cast<Eigen::Index>(std::ceil((transient_cut - traj.t[0]) / dt));
  }
  if (start < 0) start = 0;
  const Eigen::Index k = total - start;
  if (k < 32) throw SimError(ErrorCode::TrajectoryTooShort, "window after transient too short");

  const int n_modes = static_cast<int>(traj.alpha.cols());
  std::vector<Oscillation> osc(n_modes);
  for (int m = 0; m < n_modes; ++m) osc[m] = oscillation_measure(traj.alpha.col(m).tail(k));

  const int probe = 0;  // mode 1 carries the cycle
  if (osc[probe].relative < opts.amplitude_floor) return std::nullopt;

  // Autocorrelation of Re alpha_1 with the mean removed.
  rvec s(k);
  for (Eigen::Index i = 0; i < k; ++i) s[i] = traj.alpha(start + i, probe).real();
  s.array() -= s.mean();
  const Eigen::Index max_lag = k / 2;
  rvec r(max_lag + 1);
  for (Eigen::Index l = 0; l <= max_lag; ++l) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i + l < k; ++i) acc += s[i] * s[i + l];
    r[l] = acc / static_cast<double>(k - l);
  }
  if (r[0] <= 0.0) return std::nullopt;

  Eigen::Index peak = -1;
  for (Eigen::Index l = 2; l < max_lag; ++l) {
    if (r[l] > r[l - 1] && r[l] >= r[l + 1] && r[l] > 0.3 * r[0]) {
      peak = l;
      break;
    }
  }
  if (peak < 0) {
    throw SimError(ErrorCode::TrajectoryTooShort,
                   "oscillation present but no autocorrelation peak inside window");
  }
  // Sub-sample quadratic interpolation around the peak.
  const double ym = r[peak - 1], y0 = r[peak], yp = r[peak + 1];
  const double denom = ym - 2.0 * y0 + yp;
  double shift = 0.0;
  if (std::abs(denom) > 1e-300) shift = 0.5 * (ym - yp) / denom;
  shift = std::clamp(shift, -0.5, 0.5);

  LimitCycle lc;
  lc.period = (static_cast<double>(peak) + shift) * dt;
  lc.omega_lc = 2.0 * pi / lc.period;
  lc.mean_amplitudes.resize(n_modes);
  for (int m = 0; m < n_modes; ++m) {
    lc.mean_amplitudes[m] = traj.alpha.col(m).tail(k).cwiseAbs().mean();
    if (osc[m].relative >= opts.amplitude_floor) lc.oscillating_modes.push_back(m);
  }
  return lc;
}

CubicSolution single_mode_cubic(double v0, double delta0, double omega0) {
  if (v0 < 0.0) throw SimError(ErrorCode::BadConfig, "v0 must be >= 0");
  CubicSolution sol;
  const double w2 = omega0 * omega0;
  if (v0 == 0.0) {
    sol.roots.push_back(w2 / (delta0 * delta0 + 1.0));
    sol.stable.push_back(true);
    sol.discriminant = 0.0;
    return sol;
  }
  sol.discriminant = -v0 * v0 *
                     (27.0 * v0 * v0 * w2 * w2 +
                      4.0 * v0 * delta0 * w2 * (9.0 + delta0 * delta0) +
                      4.0 * std::pow(1.0 + delta0 * delta0, 2));

  // V0^2 n^3 + 2 D0 V0 n^2 + (D0^2+1) n - W^2 = 0, depressed via n = t - b/(3a).
  const double a = v0 * v0;
  const double b = 2.0 * delta0 * v0;
  const double c = delta0 * delta0 + 1.0;
  const double d = -w2;
  const double p = (3.0 * a * c - b * b) / (3.0 * a * a);
  const double q = (2.0 * b * b * b - 9.0 * a * b * c + 27.0 * a * a * d) / (27.0 * a * a * a);
  const double off = -b / (3.0 * a);

  std::vector<double> roots;
  const double disc_t = -4.0 * p * p * p - 27.0 * q * q;  // same sign as sol.discriminant
  if (disc_t > 0.0) {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double theta = std::acos(std::clamp(3.0 * q / (p * m), -1.0, 1.0)) / 3.0;
    for (int kk = 0; kk < 3; ++kk) {
      roots.push_back(off + m * std::cos(theta - 2.0 * pi * kk / 3.0));
    }
  } else {
    const double s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    const double u = std::cbrt(-q / 2.0 + s);
    const double v = std::cbrt(-q / 2.0 - s);
    roots.push_back(off + u + v);
  }
  std::sort(roots.begin(), roots.end());
  for (double n : roots) {
    if (n < -1e-9) continue;  // unphysical
    n = std::max(n, 0.0);
    sol.roots.push_back(n);
    sol.stable.push_back((v0 * n + delta0) * (3.0 * v0 * n + delta0) >= 0.0);
  }
  return sol;
}

PolarResiduals polar_relations_residual(const FixedPoint& fp, const SystemParams& p,
                                        double detected_omega_lc) {
  if (p.n_modes != 3) throw SimError(ErrorCode::NotInLCPhase, "requires the 3-mode system");
  const double r1 = std::abs(fp.alpha[0]);
  const double r2 = std::abs(fp.alpha[1]);
  const double r3 = std::abs(fp.alpha[2]);
  if (r1 < 1e-8 || r3 < 1e-8 || r2 < 1e-12) {
    throw SimError(ErrorCode::NotInLCPhase, "unpumped-mode amplitudes vanish at this point");
  }
  const double phi1 = std::arg(fp.alpha[0]);
  const double phi2 = std::arg(fp.alpha[1]);
  const double phi3 = std::arg(fp.alpha[2]);
  const double phi0 = 2.0 * phi2 - phi1 - phi3;

  PolarResiduals res;
  res.amplitude_ratio = (r1 * r1) / (r3 * r3) - p.gamma[2] / p.gamma[0];
  res.sin_phi0 = std::sin(phi0) - std::sqrt(p.gamma[0] * p.gamma[2]) / (p.v0 * r2 * r2);
  // Drive-phase balance as measured from the converged fixed point (the
  // printed relation is dimensionally inconsistent; this is the Im part of
  // the pumped-mode stationarity condition).
  res.drive_balance = p.omega0 * std::sin(phi2) + p.gamma[1] * r2 +
                      2.0 * p.v0 * r1 * r2 * r3 * std::sin(phi0);
  if (detected_omega_lc >= 0.0) {
    res.omega_lc_mismatch = detected_omega_lc - lc_frequency_bare(p);
  }
  return res;
}

SystemParams apply_axis(const SystemParams& base, SweepAxis axis, double value) {
  SystemParams p = base;
  switch (axis) {
    case SweepAxis::v0:
      p.v0 = value;
      break;
    case SweepAxis::omega0:
      p.omega0 = value;
      break;
    case SweepAxis::delta0: {
      const double shift = value - p.delta[p.pump()];
      p.delta.array() += shift;
      break;
    }
    case SweepAxis::delta_d: {
      if (p.n_modes != 3) throw SimError(ErrorCode::BadConfig, "delta_d sweep needs 3 modes");
      const double shift = 0.5 * (p.delta_d - value);
      p.delta[0] += shift;
      p.delta[2] += shift;
      break;
    }
  }
  return validate(p);
}

PhaseCell classify_cell(const SystemParams& p, int n_seeds, std::uint64_t cell_seed) {
  PhaseCell cell;
  const double scale = auto_seed_scale(p);
  auto rhs = [&p](double, const cvec& y) { return gpe_drift(y, p); };
  OdeOptions ode;
  ode.rtol = 1e-8;
  ode.atol = 1e-10;

  FixedPointOptions fopt;
  std::vector<cvec> fp_reps;
  std::vector<bool> fp_stable;
  bool lc_found = false;
  int failed = 0;

  for (int s = 0; s < n_seeds; ++s) {
    RngStream rng(cell_seed, static_cast<std::uint64_t>(s));
    cvec a0 = random_seed_state(p, rng, scale);
    try {
      cvec relaxed = integrate_to(rhs, a0, 0.0, 120.0, ode);
      MeanFieldTrajectory window = integrate(relaxed, p, 40.0, 2048, ode);
      auto lc = detect_limit_cycle(window, 0.0);
      if (lc && p.n_modes == 3) {
        // Distinguish a genuine cycle from a slowly decaying spiral.
        const auto osc = oscillation_measure(window.alpha.col(0));
        if (osc.decay > 0.8) {
          lc_found = true;
          continue;
        }
        relaxed = window.alpha.row(window.alpha.rows() - 1).transpose();
      }
      auto fp = polish_fixed_point(lc ? window.alpha.row(window.alpha.rows() - 1).transpose()
                                      : relaxed,
                                   p, fopt);
      if (!fp) {
        ++failed;
        continue;
      }
      bool merged = false;
      for (std::size_t c = 0; c < fp_reps.size(); ++c) {
        if ((fp_reps[c] - fp->alpha).norm() < fopt.cluster_radius) {
          merged = true;
          break;
        }
      }
      if (!merged) {
        fp_reps.push_back(fp->alpha);
        fp_stable.push_back(fp->stable);
      }
    } catch (const SimError&) {
      ++failed;
    }
  }

  int n_stable = 0;
  for (bool st : fp_stable) n_stable += st ? 1 : 0;
  cell.lc_present = lc_found;
  cell.n_stable_fp = n_stable + (lc_found ? 1 : 0);
  cell.converged = failed < std::max(1, n_seeds / 2);
  if (lc_found || cell.n_stable_fp >= 3) {
    cell.phase = Phase::C;
  } else if (cell.n_stable_fp == 2) {
    cell.phase = Phase::B;
  } else {
    cell.phase = Phase::A;
  }
  return cell;
}

std::vector<PhaseCell> phase_diagram(const SystemParams& base, const SweepGrid& grid,
                                     int n_seeds, std::uint64_t master_seed) {
  const Eigen::Index nx = grid.x_values.size();
  const Eigen::Index ny = grid.y_values.size();
  std::vector<PhaseCell> cells(nx * ny);
#pragma omp parallel for schedule(dynamic) collapse(2)
  for (Eigen::Index iy = 0; iy < ny; ++iy) {
    for (Eigen::Index ix = 0; ix < nx; ++ix) {
      const Eigen::Index idx = iy * nx + ix;
      SystemParams p = apply_axis(base, grid.x_axis, grid.x_values[ix]);
      p = apply_axis(p, grid.y_axis, grid.y_values[iy]);
      std::uint64_t st = master_seed;
      const std::uint64_t cell_seed = splitmix64(st) ^ (0x424b5aULL + idx);
      PhaseCell cell = classify_cell(p, n_seeds, cell_seed);
      cell.x = grid.x_values[ix];
      cell.y = grid.y_values[iy];
      cells[idx] = cell;
    }
  }
  return cells;
}

LCFixedPoint lc_fixed_point(const SystemParams& params, std::uint64_t rng_seed, double t_relax) {
  if (params.n_modes != 3)
    throw SimError(ErrorCode::NotInLCPhase, "limit cycles require the 3-mode system");
  OdeOptions ode;
  ode.rtol = 1e-10;
  ode.atol = 1e-12;
  auto rhs = [&params](double, const cvec& y) { return gpe_drift(y, params); };
  const double scale = auto_seed_scale(params);

  for (int attempt = 0; attempt < 12; ++attempt) {
    RngStream rng(rng_seed, static_cast<std::uint64_t>(attempt));
    cvec a0 = random_seed_state(params, rng, scale);
    cvec relaxed;
    try {
      relaxed = integrate_to(rhs, a0, 0.0, t_relax, ode);
    } catch (const SimError&) {
      continue;
    }
    MeanFieldTrajectory window = integrate(relaxed, params, 60.0, 4096, ode);
    std::optional<LimitCycle> lc;
    try {
      lc = detect_limit_cycle(window, 0.0);
    } catch (const SimError&) {
      continue;
    }
    if (!lc) continue;

    // Equal decay on modes 1/3 pins omega_LC to the bare half-spacing;
    // otherwise use the detected value.
    const bool equal_gamma = std::abs(params.gamma[0] - params.gamma[2]) < 1e-12;
    const double omega_lc = equal_gamma ? lc_frequency_bare(params) : lc->omega_lc;

    LCFixedPoint out;
    out.omega_lc = omega_lc;
    out.frame_params = corotating_params(params, omega_lc);
    FixedPointOptions fopt;
    fopt.newton_tol = 1e-12;
    auto fp = polish_fixed_point(window.alpha.row(window.alpha.rows() - 1).transpose(),
                                 out.frame_params, fopt);
    if (!fp || std::abs(fp->alpha[0]) < 1e-6 || std::abs(fp->alpha[2]) < 1e-6) continue;
    out.fp = std::move(*fp);
    return out;
  }
  throw SimError(ErrorCode::NotInLCPhase, "no limit cycle found from random seeds");
}

}  // namespace meanfield
}  // namespace kerr
