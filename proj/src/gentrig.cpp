#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "spiraldim/errors.hpp"
#include "spiraldim/ode.hpp"
#include "spiraldim/spirals.hpp"

namespace spiraldim {

void GenTrig::rhs(const double* y, double* dy) const {
  dy[0] = -n_ * ipow(y[1], 2 * n_ - 1);
  dy[1] = m_ * ipow(y[0], 2 * m_ - 1);
  dy[2] = ipow(y[1], n_ - 1) * ipow(y[0], m_ - 1);
}

void GenTrig::project(double* y) const {
  // Pull (cs, sn) back to the level set cs^{2m} + sn^{2n} = 1 by radial
  // scaling; Newton on g(s) = s^{2m} cs^{2m} + s^{2n} sn^{2n} - 1, s near 1.
  double s = 1.0;
  const double a = ipow(y[0], 2 * m_), b = ipow(y[1], 2 * n_);
  for (int it = 0; it < 3; ++it) {
    const double sa = ipow(s, 2 * m_), sb = ipow(s, 2 * n_);
    const double g = sa * a + sb * b - 1.0;
    const double dg = (2 * m_ * sa * a + 2 * n_ * sb * b) / s;
    if (dg == 0.0) break;
    s -= g / dg;
  }
  y[0] *= s;
  y[1] *= s;
}

GenTrig::GenTrig(int m, int n, int grid) : m_(m), n_(n), grid_(grid) {
  if (m < 1 || n < 1) throw DomainError("GenTrig needs m, n >= 1");
  if (grid < 16) throw DomainError("GenTrig grid too small");
  T_ = period_T(m, n);
  const double h = T_ / grid_;
  OdeOptions opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-14;
  opt.record = false;
  opt.project = [this](double, double* y) { project(y); };
  auto f = [this](double, const double* y, double* dy) { rhs(y, dy); };
  nodes_.resize(3 * (grid_ + 1));
  std::vector<double> y0 = {1.0, 0.0, 0.0};
  nodes_[0] = 1.0;
  nodes_[1] = 0.0;
  nodes_[2] = 0.0;
  for (int i = 0; i < grid_; ++i) {
    auto res = ode_integrate(f, y0, i * h, (i + 1) * h, opt);
    y0 = res.y_end;
    nodes_[3 * (i + 1) + 0] = y0[0];
    nodes_[3 * (i + 1) + 1] = y0[1];
    nodes_[3 * (i + 1) + 2] = y0[2];
  }
  a_period_ = nodes_[3 * grid_ + 2];
  // One full period must close the orbit; anything else means the period
  // formula and the flow disagree.
  const double close = std::hypot(nodes_[3 * grid_] - 1.0,
                                  nodes_[3 * grid_ + 1]);
  if (close > 1e-8) throw NonConvergence("generalized trig period mismatch");
}

void GenTrig::eval_full(double phi, double& cs, double& sn, double& a) const {
  const double l = std::floor(phi / T_);
  double red = phi - l * T_;
  if (red >= T_) red = 0.0;
  const double h = T_ / grid_;
  int i = static_cast<int>(red / h);
  if (i >= grid_) i = grid_ - 1;
  std::vector<double> y0 = {nodes_[3 * i], nodes_[3 * i + 1],
                            nodes_[3 * i + 2]};
  const double t0 = i * h;
  if (red > t0) {
    OdeOptions opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-14;
    opt.record = false;
    opt.project = [this](double, double* y) { project(y); };
    auto f = [this](double, const double* y, double* dy) { rhs(y, dy); };
    y0 = ode_integrate(f, y0, t0, red, opt).y_end;
  }
  cs = y0[0];
  sn = y0[1];
  a = l * a_period_ + y0[2];
}

void GenTrig::eval(double phi, double& cs, double& sn) const {
  double a;
  eval_full(phi, cs, sn, a);
}

double GenTrig::A(double phi) const {
  double cs, sn, a;
  eval_full(phi, cs, sn, a);
  return a;
}

std::shared_ptr<const GenTrig> GenTrig::get(int m, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const GenTrig>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{m, n}];
  if (!slot) slot = std::make_shared<GenTrig>(m, n);
  return slot;
}

}  // namespace spiraldim
