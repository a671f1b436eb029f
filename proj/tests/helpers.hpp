#pragma once
// Shared oracle helpers. Each one leans only on the generic numerics layer
// and the raw vector fields, never on the closed forms under test.
#include <cmath>
#include <vector>

#include "spiraldim/ode.hpp"
#include "spiraldim/roots.hpp"
#include "spiraldim/spirals.hpp"

namespace oracle {

// Radius of the field2d trajectory through (r0, phi0), advanced in the
// polar angle: dr/dphi = r (x x' + y y') / (x y' - y x').
inline double radial_ode_radius(const spiraldim::FocusParams& p, double r0,
                                double phi0, double phi1,
                                double rel_tol = 1e-11) {
  auto f = [&p](double phi, const double* y, double* dy) {
    const double r = y[0];
    const double x = r * std::cos(phi), yy = r * std::sin(phi);
    double dx, dyv;
    spiraldim::field2d(p, x, yy, dx, dyv);
    const double rdot = (x * dx + yy * dyv) / r;
    const double phidot = (x * dyv - yy * dx) / (r * r);
    dy[0] = rdot / phidot;
  };
  spiraldim::OdeOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-200;
  opt.record = false;
  return spiraldim::ode_integrate(f, {r0}, phi0, phi1, opt).y_end[0];
}

// Sn component of the raw generalized trig flow from (1, 0), without any
// manifold projection; independent period witness.
inline double sn_at_raw(int m, int n, double t) {
  auto f = [m, n](double, const double* y, double* dy) {
    dy[0] = -n * spiraldim::ipow(y[1], 2 * n - 1);
    dy[1] = m * spiraldim::ipow(y[0], 2 * m - 1);
  };
  spiraldim::OdeOptions opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-14;
  opt.record = false;
  return spiraldim::ode_integrate(f, {1.0, 0.0}, 0.0, t, opt).y_end[1];
}

// First positive-slope return of Sn to zero near the candidate period.
inline double first_return_time(int m, int n, double t_guess) {
  return spiraldim::solve_monotone(
      [m, n](double t) { return sn_at_raw(m, n, t); }, t_guess - 0.2,
      t_guess + 0.2);
}

}  // namespace oracle
