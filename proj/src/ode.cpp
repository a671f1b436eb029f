#include "spiraldim/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spiraldim/errors.hpp"

namespace spiraldim {
namespace {

// Dormand-Prince coefficients.
const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
const double a21 = 1.0 / 5;
const double a31 = 3.0 / 40, a32 = 9.0 / 40;
const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
             a54 = -212.0 / 729;
const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
             a64 = 49.0 / 176, a65 = -5103.0 / 18656;
const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
             b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 4th order embedded weights.
const double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
             e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

}  // namespace

OdeResult ode_integrate(const OdeField& f, const std::vector<double>& y0,
                        double t0, double t1, const OdeOptions& opt) {
  const int dim = static_cast<int>(y0.size());
  if (dim == 0 || dim > 16) throw DomainError("ode_integrate: bad dimension");
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  OdeResult res;
  std::vector<double> y = y0;
  double t = t0;
  if (opt.project) opt.project(t, y.data());

  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim),
      k7(dim), ytmp(dim), y5(dim);
  auto push_record = [&](double tt, const std::vector<double>& yy) {
    if (!opt.record) return;
    res.t.push_back(tt);
    res.states.insert(res.states.end(), yy.begin(), yy.end());
  };
  push_record(t, y);
  if (span == 0.0) {
    res.t_end = t;
    res.y_end = y;
    return res;
  }

  f(t, y.data(), k1.data());
  double h_max = opt.h_max > 0 ? opt.h_max : span;
  double h;
  if (opt.h_init > 0) {
    h = std::min(opt.h_init, h_max);
  } else {
    double dy0 = 0, yy0 = 0;
    for (int i = 0; i < dim; ++i) {
      dy0 = std::max(dy0, std::abs(k1[i]));
      yy0 = std::max(yy0, std::abs(y[i]));
    }
    h = dy0 > 0 ? std::min(h_max, 0.01 * std::max(yy0, 1e-6) / dy0)
                : std::min(h_max, span / 100);
    h = std::max(h, span * 1e-12);
  }
  const double h_floor = opt.h_min * span;
  double err_prev = 1.0;
  bool k1_fresh = true;

  for (long step = 0; step < opt.max_steps; ++step) {
    if (std::abs(t - t1) <= 0.0) break;
    bool last = false;
    if (h >= std::abs(t1 - t)) {
      h = std::abs(t1 - t);
      last = true;
    }
    double hs = dir * h;
    if (!k1_fresh) f(t, y.data(), k1.data());
    k1_fresh = true;

    for (int i = 0; i < dim; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
    f(t + c2 * hs, ytmp.data(), k2.data());
    for (int i = 0; i < dim; ++i)
      ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * hs, ytmp.data(), k3.data());
    for (int i = 0; i < dim; ++i)
      ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * hs, ytmp.data(), k4.data());
    for (int i = 0; i < dim; ++i)
      ytmp[i] =
          y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * hs, ytmp.data(), k5.data());
    for (int i = 0; i < dim; ++i)
      ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                             a64 * k4[i] + a65 * k5[i]);
    f(t + hs, ytmp.data(), k6.data());
    for (int i = 0; i < dim; ++i)
      y5[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                           b6 * k6[i]);
    f(t + hs, y5.data(), k7.data());

    double err = 0.0;
    for (int i = 0; i < dim; ++i) {
      double y4 = y[i] + hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                               e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      double sc =
          opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      double d = (y5[i] - y4) / sc;
      err += d * d;
    }
    err = std::sqrt(err / dim);

    if (err <= 1.0) {
      t = last ? t1 : t + hs;
      y = y5;
      if (opt.project) opt.project(t, y.data());
      res.steps_accepted++;
      push_record(t, y);
      if (opt.stop && opt.stop(t, y.data())) {
        res.stopped = true;
        break;
      }
      // FSAL would reuse k7; keep it simple and refresh unless projection
      // is absent (projection invalidates the last derivative anyway).
      k1_fresh = false;
      double fac = 0.9 * std::pow(err > 1e-10 ? err : 1e-10, -0.7 / 5.0) *
                   std::pow(err_prev, 0.4 / 5.0);
      fac = std::min(5.0, std::max(0.2, fac));
      h = std::min(h * fac, h_max);
      err_prev = err > 1e-10 ? err : 1e-10;
    } else {
      res.steps_rejected++;
      double fac = std::max(0.1, 0.9 * std::pow(err, -1.0 / 5.0));
      h *= fac;
      k1_fresh = true;  // k1 still valid at unchanged (t, y)
    }
    if (h < h_floor)
      throw StepUnderflow("ode_integrate: step underflow at t=" +
                          std::to_string(t));
    if (step + 1 == opt.max_steps && t != t1)
      throw NonConvergence("ode_integrate: max_steps at t=" +
                           std::to_string(t));
  }
  res.t_end = t;
  res.y_end = y;
  return res;
}

}  // namespace spiraldim
