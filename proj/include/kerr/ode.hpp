#pragma once

#include <functional>

#include "kerr/common.hpp"

namespace kerr {

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-11;
  double h_init = 1e-3;
  double h_min = 1e-12;
  double h_max = 0.5;
};

struct OdeTrajectory {
  rvec t;                    ///< uniform output grid
  std::vector<cvec> states;  ///< state at each grid point
  std::size_t n_steps = 0;
  std::size_t n_rejected = 0;
};

using OdeRhs = std::function<cvec(double, const cvec&)>;

/// Adaptive Dormand-Prince 5(4) integration with output sampled on a uniform
/// grid of n_out points spanning [t0, t1] (endpoints included).
/// Throws StepSizeUnderflow when the controller collapses below h_min and
/// NonFiniteState when the state leaves the finite domain.
OdeTrajectory integrate_ode(const OdeRhs& rhs, const cvec& y0, double t0, double t1,
                            int n_out, const OdeOptions& opts = {});

/// Single endpoint convenience wrapper.
cvec integrate_to(const OdeRhs& rhs, const cvec& y0, double t0, double t1,
                  const OdeOptions& opts = {});

}  // namespace kerr
