#include "kerr/ode.hpp"

#include <algorithm>
#include <cmath>

namespace kerr {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Embedded 4th-order weights.
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

struct StepResult {
  cvec y;
  cvec k1_next;  // FSAL
  double err;
};

StepResult dopri5_step(const OdeRhs& rhs, double t, const cvec& y, const cvec& k1, double h,
                       double rtol, double atol) {
  const cvec k2 = rhs(t + c2 * h, y + h * (a21 * k1));
  const cvec k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
  const cvec k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const cvec k5 = rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const cvec k6 = rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  cvec ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const cvec k7 = rhs(t + h, ynew);
  const cvec y4 = y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

  double err = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
    const double d = std::abs(ynew[i] - y4[i]);
    err = std::max(err, d / sc);
  }
  return {std::move(ynew), k7, err};
}

}  // namespace

OdeTrajectory integrate_ode(const OdeRhs& rhs, const cvec& y0, double t0, double t1, int n_out,
                            const OdeOptions& opts) {
  if (!(t1 > t0)) throw SimError(ErrorCode::BadConfig, "integration requires t1 > t0");
  if (n_out < 2) throw SimError(ErrorCode::BadConfig, "need at least 2 output points");

  OdeTrajectory traj;
  traj.t = rvec::LinSpaced(n_out, t0, t1);
  traj.states.reserve(n_out);
  traj.states.push_back(y0);

  cvec y = y0;
  double t = t0;
  cvec k1 = rhs(t, y);
  double h = std::min(opts.h_init, opts.h_max);
  int next_out = 1;

  while (next_out < n_out) {
    // Step exactly onto the next output time when we would overshoot it.
    const double t_target = traj.t[next_out];
    bool hit_output = false;
    if (t + h >= t_target - 1e-14 * std::max(1.0, std::abs(t_target))) {
      h = t_target - t;
      hit_output = true;
    }
    StepResult st = dopri5_step(rhs, t, y, k1, h, opts.rtol, opts.atol);
    if (!all_finite(st.y)) {
      throw SimError(ErrorCode::NonFiniteState,
                     "state left the finite domain at t = " + std::to_string(t));
    }
    if (st.err <= 1.0) {
      t = hit_output ? t_target : t + h;
      y = std::move(st.y);
      k1 = std::move(st.k1_next);
      ++traj.n_steps;
      if (hit_output) {
        traj.states.push_back(y);
        ++next_out;
      }
    } else {
      ++traj.n_rejected;
    }
    const double fac = std::clamp(0.9 * std::pow(std::max(st.err, 1e-10), -0.2), 0.2, 5.0);
    h = std::min(h * fac, opts.h_max);
    if (h < opts.h_min) {
      throw SimError(ErrorCode::StepSizeUnderflow,
                     "step size underflow at t = " + std::to_string(t));
    }
  }
  return traj;
}

cvec integrate_to(const OdeRhs& rhs, const cvec& y0, double t0, double t1,
                  const OdeOptions& opts) {
  return integrate_ode(rhs, y0, t0, t1, 2, opts).states.back();
}

}  // namespace kerr
