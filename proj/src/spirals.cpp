#include "spiraldim/spirals.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "spiraldim/errors.hpp"
#include "spiraldim/gamma.hpp"

namespace spiraldim {

double ipow(double b, int e) {
  // e >= 0 everywhere in this library; 0^0 = 1 so s^{n-1} at n = 1 is exact.
  double acc = 1.0, base = b;
  for (int q = e; q > 0; q >>= 1) {
    if (q & 1) acc *= base;
    base *= base;
  }
  return acc;
}

FocusParams::FocusParams(int m_, int n_, int k_, int sign_)
    : m(m_), n(n_), k(k_), sign(sign_) {
  if (m < 1 || n < 1) throw DomainError("focus degrees must be >= 1");
  if (m % 2 == 0 || n % 2 == 0)
    throw DomainError("even focus degree gives a center, not a focus");
  if (k < 0) throw DomainError("focus exponent k must be >= 0");
  if (sign != -1 && sign != 1) throw DomainError("focus sign must be -1 or 1");
}

PqCoeffs pq_coeffs(int n, int k, double phi) {
  if (n < 1 || n % 2 == 0) throw DomainError("pq_coeffs needs odd n >= 1");
  if (k < 0) throw DomainError("pq_coeffs needs k >= 0");
  const double s = std::sin(phi), c = std::cos(phi);
  const double den = ipow(s, 2 * n) + ipow(c, 2 * n);
  PqCoeffs pc;
  pc.p = (ipow(s, 2 * n - 1) * c - ipow(c, 2 * n - 1) * s) / den;
  pc.q = -ipow(s, n - 1) * ipow(c, n - 1) * ipow(den, k) / den;
  return pc;
}

namespace {

// s^{n-1} c^{n-1} / (s^{2n} + c^{2n}) at tau.
double winding_integrand(int n, double tau) {
  const double s = std::sin(tau), c = std::cos(tau);
  return ipow(s, n - 1) * ipow(c, n - 1) /
         (ipow(s, 2 * n) + ipow(c, 2 * n));
}

}  // namespace

double integral_K(int n, int k, const QuadOptions& opt) {
  if (k < 1) throw DomainError("integral_K needs k >= 1");
  const double two_pi = 2.0 * M_PI;
  const double full =
      quad([n](double t) { return winding_integrand(n, t); }, 0.0, two_pi, opt)
          .value;
  return 2.0 * n * k * full / two_pi;
}

double integral_K0(int n, const QuadOptions& opt) {
  const double two_pi = 2.0 * M_PI;
  const double full =
      quad([n](double t) { return winding_integrand(n, t); }, 0.0, two_pi, opt)
          .value;
  return full / two_pi;
}

double trig_factor(int n, double phi) {
  const double s = std::sin(phi), c = std::cos(phi);
  return std::pow(ipow(s, 2 * n) + ipow(c, 2 * n), -1.0 / (2.0 * n));
}

PeriodicPart::PeriodicPart(int n, int k, int grid) : n_(n), k_(k), grid_(grid) {
  if (n < 1 || n % 2 == 0) throw DomainError("PeriodicPart needs odd n");
  if (k < 0) throw DomainError("PeriodicPart needs k >= 0");
  if (grid < 16) throw DomainError("PeriodicPart grid too small");
  const double two_pi = 2.0 * M_PI;
  const double h = two_pi / grid_;
  QuadOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-16;
  nodes_.resize(grid_ + 1);
  nodes_[0] = 0.0;
  double acc = 0.0;
  for (int i = 0; i < grid_; ++i) {
    acc += quad([this](double t) { return integrand(t); }, i * h, (i + 1) * h,
                opt)
               .value;
    nodes_[i + 1] = acc;
  }
  K_ = acc / two_pi;
  p_max_abs_ = 0.0;
  for (int i = 0; i <= grid_; ++i) {
    const double p = nodes_[i] - K_ * (i * h);
    p_max_abs_ = std::max(p_max_abs_, std::fabs(p));
  }
}

double PeriodicPart::integrand(double tau) const {
  const double fac = (k_ >= 1) ? 2.0 * n_ * k_ : 1.0;
  return fac * winding_integrand(n_, tau);
}

double PeriodicPart::P(double phi) const {
  const double two_pi = 2.0 * M_PI;
  double red = phi - two_pi * std::floor(phi / two_pi);
  if (red >= two_pi) red = 0.0;  // floor rounding at the seam
  const double h = two_pi / grid_;
  int i = static_cast<int>(red / h);
  if (i >= grid_) i = grid_ - 1;
  const double t0 = i * h, t1 = (i + 1) * h;
  const double s = (red - t0) / h;
  const double f0 = nodes_[i], f1 = nodes_[i + 1];
  const double d0 = h * integrand(t0), d1 = h * integrand(t1);
  const double s2 = s * s, s3 = s2 * s;
  const double val = (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * d0 +
                     (-2 * s3 + 3 * s2) * f1 + (s3 - s2) * d1;
  return val - K_ * red;
}

double PeriodicPart::direct_I(double phi) const {
  QuadOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-16;
  opt.max_evals = 2000000;
  return quad([this](double t) { return integrand(t); }, 0.0, phi, opt).value;
}

std::shared_ptr<const PeriodicPart> PeriodicPart::get(int n, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const PeriodicPart>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, k}];
  if (!slot) slot = std::make_shared<PeriodicPart>(n, k);
  return slot;
}

SpiralNN::SpiralNN(const FocusParams& p, double r0, double phi0) : p_(p) {
  if (p.m != p.n) throw DomainError("SpiralNN needs m == n");
  if (!(r0 > 0.0)) throw DomainError("SpiralNN needs r0 > 0");
  pp_ = PeriodicPart::get(p.n, p.k);
  const double sigma = (p.sign < 0) ? 1.0 : -1.0;
  if (p.k >= 1) {
    const double tf0 = trig_factor(p.n, phi0);
    C_ = std::pow(r0 / tf0, -2.0 * p.n * p.k) - sigma * pp_->I(phi0);
  } else {
    C_ = r0 * std::exp(sigma * pp_->I(phi0));
  }
}

double SpiralNN::alpha() const {
  if (p_.k < 1) throw DomainError("alpha undefined for k = 0");
  return 1.0 / (2.0 * p_.n * p_.k);
}

double SpiralNN::r(double phi) const {
  const double sigma = (p_.sign < 0) ? 1.0 : -1.0;
  if (p_.k >= 1) {
    const double b = sigma * pp_->I(phi) + C_;
    if (!(b > 0.0))
      throw DomainError("spiral branch expired at this angle");
    return trig_factor(p_.n, phi) * std::pow(b, -alpha());
  }
  return C_ * std::exp(-sigma * pp_->I(phi));
}

double SpiralNN::winding_gap_at(double r_here, double phi) const {
  if (p_.k < 1) throw DomainError("winding gap formula needs k >= 1");
  const double s = std::sin(phi), c = std::cos(phi);
  const double den = ipow(s, 2 * p_.n) + ipow(c, 2 * p_.n);
  return (2.0 * M_PI / p_.n) * std::pow(r_here, 2.0 * p_.n * p_.k + 1.0) *
         ipow(den, p_.k);
}

double period_T(int m, int n) {
  if (m < 1 || n < 1) throw DomainError("period_T needs m, n >= 1");
  const double a = 1.0 / (2.0 * m), b = 1.0 / (2.0 * n);
  return 2.0 / (m * n) * std::exp(log_gamma(a) + log_gamma(b) -
                                  log_gamma(a + b));
}

SpiralMN::SpiralMN(const FocusParams& p, double r0, double phi0) : p_(p) {
  if (!(r0 > 0.0)) throw DomainError("SpiralMN needs r0 > 0");
  gt_ = GenTrig::get(p.m, p.n);
  const double mnk = 2.0 * p.m * p.n * p.k;
  if (p.k >= 1) {
    C_ = std::pow(r0, -mnk) + p.sign * mnk * gt_->A(phi0);
  } else {
    C_ = r0 * std::exp(-p.sign * gt_->A(phi0));
  }
}

double SpiralMN::r(double phi) const {
  if (p_.k >= 1) {
    const double mnk = 2.0 * p_.m * p_.n * p_.k;
    const double z = C_ - p_.sign * mnk * gt_->A(phi);
    if (!(z > 0.0))
      throw DomainError("spiral branch expired at this angle");
    return std::pow(z, -1.0 / mnk);
  }
  return C_ * std::exp(p_.sign * gt_->A(phi));
}

void SpiralMN::point(double phi, double& x, double& y) const {
  double cs, sn;
  gt_->eval(phi, cs, sn);
  const double rr = r(phi);
  x = ipow(rr, p_.n) * cs;
  y = ipow(rr, p_.m) * sn;
}

void field2d(const FocusParams& p, double x, double y, double& dx,
             double& dy) {
  const int m = p.m, n = p.n, k = p.k;
  const double e = ipow(ipow(x, 2 * m) + ipow(y, 2 * n), k);
  if (m == n) {
    dx = -ipow(y, 2 * n - 1) + p.sign * ipow(x, n) * ipow(y, n - 1) * e;
    dy = ipow(x, 2 * n - 1) + p.sign * ipow(x, n - 1) * ipow(y, n) * e;
  } else {
    dx = -n * ipow(y, 2 * n - 1) + p.sign * n * ipow(x, m) * ipow(y, n - 1) * e;
    dy = m * ipow(x, 2 * m - 1) + p.sign * m * ipow(x, m - 1) * ipow(y, n) * e;
  }
}

void field3d(double p0, double q0, double x, double y, double z, double* out) {
  if (!(z > 0.0)) throw DomainError("field3d needs z > 0");
  const double d = q0 - p0;
  const double zp = std::pow(z, d + 1.0);
  out[0] = -y - p0 * x * zp;
  out[1] = x * std::pow(z, 2.0 * d) - q0 * y * zp;
  out[2] = -std::pow(z, 2.0 + d);
}

double invariant3d_residual(double p0, double q0, double x, double y,
                            double z) {
  if (!(z > 0.0)) throw DomainError("invariant needs z > 0");
  const double a = x / std::pow(z, p0);
  const double b = y / std::pow(z, q0);
  return a * a + b * b - 1.0;
}

}  // namespace spiraldim
