#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "spiraldim/bigfloat.hpp"
#include "spiraldim/errors.hpp"
#include "spiraldim/spirals.hpp"

using namespace spiraldim;

namespace {

template <class R>
R bipow(R b, int e) {
  R acc = 1, base = b;
  for (int q = e; q > 0; q >>= 1) {
    if (q & 1) acc *= base;
    base *= base;
  }
  return acc;
}

// Comparability envelope for r phi^alpha over a winding window [w_lo, w_hi]
// (absolute angles), given B(phi) = K|phi| + C + P with |P| <= pm.
struct Envelope {
  double lo, hi;
};
Envelope comparability_bounds(double K, double C, double pm, double alpha,
                              double tf_max, double w_lo, double w_hi) {
  Envelope e;
  e.lo = std::pow(w_lo / (K * w_lo + C + pm), alpha);
  e.hi = tf_max * std::pow(w_hi / (K * w_hi + C - pm), alpha);
  return e;
}

double dense_p_max(const PeriodicPart& pp) {
  double pm = 0.0;
  for (int i = 0; i <= 20000; ++i)
    pm = std::max(pm, std::fabs(pp.P(2.0 * M_PI * i / 20000)));
  return pm + 1e-6;
}

}  // namespace

TEST_CASE("pq coefficients") {
  const double qpi = M_PI / 4.0;
  auto pc = pq_coeffs(3, 2, qpi);
  CHECK(std::fabs(pc.p) < 1e-15);
  CHECK(pc.q == doctest::Approx(-1.0 / 16.0).epsilon(1e-14));

  // n = 1 degenerates to p = 0, q = -1 for every k >= 1.
  auto pc1 = pq_coeffs(1, 3, 0.9);
  CHECK(pc1.p == 0.0);
  CHECK(pc1.q == doctest::Approx(-1.0).epsilon(1e-15));

  // Cross-check the double evaluation against a 50-digit one.
  for (auto cfg : std::vector<std::array<int, 2>>{{3, 2}, {5, 1}}) {
    const int n = cfg[0], k = cfg[1];
    const double phi = (n == 3) ? 0.37 : 2.1;
    const Big50 s = sin(Big50(phi)), c = cos(Big50(phi));
    const Big50 den = bipow(s, 2 * n) + bipow(c, 2 * n);
    const Big50 pb = (bipow(s, 2 * n - 1) * c - bipow(c, 2 * n - 1) * s) / den;
    const Big50 qb = -bipow(s, n - 1) * bipow(c, n - 1) * bipow(den, k) / den;
    auto got = pq_coeffs(n, k, phi);
    CHECK(got.p ==
          doctest::Approx(static_cast<double>(pb)).epsilon(1e-14));
    CHECK(got.q ==
          doctest::Approx(static_cast<double>(qb)).epsilon(1e-14));
  }

  CHECK_THROWS_AS(pq_coeffs(2, 1, 0.3), DomainError);
  CHECK_THROWS_AS(FocusParams(2, 2, 1, -1), DomainError);
  CHECK_THROWS_AS(FocusParams(3, 3, -1, -1), DomainError);
  CHECK_THROWS_AS(FocusParams(3, 3, 1, 0), DomainError);
}

TEST_CASE("winding coefficients") {
  CHECK(integral_K(1, 1) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(integral_K(3, 2) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(integral_K(3, 11) == doctest::Approx(22.0).epsilon(1e-10));
  CHECK(integral_K(11, 11) == doctest::Approx(22.0).epsilon(1e-10));
  CHECK(integral_K0(1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(integral_K0(3) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(integral_K0(11) == doctest::Approx(1.0 / 11.0).epsilon(1e-10));
}

TEST_CASE("periodic part cache") {
  std::mt19937_64 rng(20240818);
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  for (auto cfg : std::vector<std::array<int, 2>>{{3, 2}, {11, 2}, {3, 0}}) {
    const auto pp = PeriodicPart::get(cfg[0], cfg[1]);
    const double expect_k = (cfg[1] >= 1) ? 2.0 * cfg[1] : 1.0 / cfg[0];
    CHECK(pp->K() == doctest::Approx(expect_k).epsilon(1e-10));
    for (int i = 0; i < 24; ++i) {
      const double phi = u(rng);
      const double direct = pp->direct_I(phi);
      CHECK(std::fabs(pp->I(phi) - direct) <=
            1e-9 * std::max(1.0, std::fabs(direct)));
    }
    // P is the periodic remainder: both period shifts and the seam vanish.
    CHECK(pp->P(0.0) == 0.0);
    for (int i = 0; i < 8; ++i) {
      const double phi = u(rng);
      CHECK(pp->P(phi + 2.0 * M_PI) == doctest::Approx(pp->P(phi)).epsilon(1e-12));
      CHECK(std::fabs(pp->P(phi)) <= pp->P_max_abs() + 1e-12);
    }
  }
  // n = 1 has constant integrand, so P vanishes identically.
  const auto pp1 = PeriodicPart::get(1, 3);
  for (int i = 0; i < 10; ++i) CHECK(std::fabs(pp1->P(0.61 * i)) < 1e-12);
}

TEST_CASE("classical closed form") {
  // Reference constant through (1/10, 0).
  SpiralNN s32(FocusParams(3, 3, 2, -1), 0.1, 0.0);
  CHECK(s32.C() == doctest::Approx(1e12).epsilon(1e-12));
  SpiralNN s11(FocusParams(1, 1, 1, -1), 0.1, 0.0);
  CHECK(s11.C() == doctest::Approx(100.0).epsilon(1e-13));

  // n = 1 collapses to r = (2 k phi + C)^{-1/(2k)} exactly.
  CHECK(s11.r(10.0) ==
        doctest::Approx(1.0 / std::sqrt(120.0)).epsilon(1e-13));
  SpiralNN s11u(FocusParams(1, 1, 1, 1), 0.1, 0.0);
  CHECK(s11u.r(20.0) ==
        doctest::Approx(1.0 / std::sqrt(60.0)).epsilon(1e-13));
  CHECK_THROWS_AS(s11u.r(51.0), DomainError);

  // Stable spiral: each winding sits strictly inside the previous one.
  for (int i = 0; i < 20; ++i) {
    const double phi = 0.37 * i;
    CHECK(s32.r(phi + 2.0 * M_PI) < s32.r(phi));
  }

  // First-order winding gap against the finite difference.
  SpiralNN sg(FocusParams(3, 3, 2, -1), 0.5, 0.0);
  for (double phi : {0.0, 0.9, 2.2}) {
    const double rh = sg.r(phi);
    const double fd = sg.r(phi) - sg.r(phi + 2.0 * M_PI);
    CHECK(sg.winding_gap_at(rh, phi) == doctest::Approx(fd).epsilon(0.02));
  }

  // Closed form against the angular ODE driven only by the raw field.
  for (auto cfg : std::vector<std::array<int, 3>>{{1, 1, -1},
                                                  {3, 2, -1},
                                                  {3, 0, -1},
                                                  {3, 2, 1}}) {
    FocusParams p(cfg[0], cfg[0], cfg[1], cfg[2]);
    SpiralNN sp(p, 0.1, 0.25);
    const double phi1 = 0.25 + ((cfg[2] < 0) ? 8.0 : -8.0) * M_PI;
    const double got = sp.r(phi1);
    const double want = oracle::radial_ode_radius(p, 0.1, 0.25, phi1);
    CHECK(got == doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("comparability windows") {
  std::mt19937_64 rng(20240819);
  const double w_lo = 2.0 * M_PI, w_hi = 200.0 * M_PI;
  std::uniform_real_distribution<double> u(w_lo, w_hi);

  // Stable k >= 1: r phi^alpha stays inside an explicit envelope.
  {
    FocusParams p(3, 3, 2, -1);
    SpiralNN sp(p, 1.0, 0.0);
    const auto pp = PeriodicPart::get(3, 2);
    const double pm = dense_p_max(*pp);
    const double tf_max = std::pow(2.0, (3.0 - 1.0) / (2.0 * 3.0));
    const auto env = comparability_bounds(pp->K(), sp.C(), pm, sp.alpha(),
                                          tf_max, w_lo, w_hi);
    CHECK(env.hi / env.lo < 1.5);  // the envelope is genuinely tight
    for (int i = 0; i < 200; ++i) {
      const double phi = u(rng);
      const double v = sp.r(phi) * std::pow(phi, sp.alpha());
      CHECK(v >= env.lo * (1.0 - 1e-12));
      CHECK(v <= env.hi * (1.0 + 1e-12));
    }
  }

  // Unstable k >= 1: same envelope in |phi| as phi runs to -infinity.
  {
    FocusParams p(3, 3, 1, 1);
    SpiralNN sp(p, 1.0, 0.0);
    const auto pp = PeriodicPart::get(3, 1);
    const double pm = dense_p_max(*pp);
    const double tf_max = std::pow(2.0, (3.0 - 1.0) / (2.0 * 3.0));
    const auto env = comparability_bounds(pp->K(), sp.C(), pm, sp.alpha(),
                                          tf_max, w_lo, w_hi);
    for (int i = 0; i < 200; ++i) {
      const double phi = -u(rng);
      const double v = sp.r(phi) * std::pow(-phi, sp.alpha());
      CHECK(v >= env.lo * (1.0 - 1e-12));
      CHECK(v <= env.hi * (1.0 + 1e-12));
    }
  }

  // k = 0: log-radius drifts linearly with a bounded periodic remainder.
  {
    FocusParams p(3, 3, 0, -1);
    SpiralNN sp(p, 0.1, 0.0);
    const auto pp = PeriodicPart::get(3, 0);
    const double pm = dense_p_max(*pp);
    double sup = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double phi = u(rng);
      const double dev = std::fabs(std::log(sp.r(phi)) - std::log(sp.C()) +
                                   pp->K() * phi);
      CHECK(dev <= pm + 1e-10);
      sup = std::max(sup, dev);
    }
    CHECK(sup > 0.01);  // the remainder is not vacuously zero
  }
}

TEST_CASE("generalized trig") {
  std::mt19937_64 rng(20240820);
  std::uniform_real_distribution<double> u(-40.0, 40.0);

  // (1, 1) reduces to circular trig with A(phi) = phi.
  const auto g11 = GenTrig::get(1, 1);
  CHECK(g11->T() == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
  for (int i = 0; i < 60; ++i) {
    const double phi = u(rng);
    double cs, sn, a;
    g11->eval_full(phi, cs, sn, a);
    CHECK(cs == doctest::Approx(std::cos(phi)).epsilon(1e-9));
    CHECK(sn == doctest::Approx(std::sin(phi)).epsilon(1e-9));
    CHECK(a == doctest::Approx(phi).epsilon(1e-9));
  }

  for (auto cfg : std::vector<std::array<int, 2>>{
           {3, 1}, {5, 3}, {2, 4}, {3, 3}}) {
    const int m = cfg[0], n = cfg[1];
    const auto gt = GenTrig::get(m, n);
    for (int i = 0; i < 300; ++i) {
      double cs, sn;
      gt->eval(u(rng), cs, sn);
      CHECK(std::fabs(bipow(cs, 2 * m) + bipow(sn, 2 * n) - 1.0) <= 1e-10);
    }
    double cs, sn;
    gt->eval(gt->T() / 4.0, cs, sn);
    CHECK(std::fabs(cs) < 1e-8);
    CHECK(sn == doctest::Approx(1.0).epsilon(1e-8));
    gt->eval(gt->T() / 2.0, cs, sn);
    CHECK(cs == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(std::fabs(sn) < 1e-8);
    gt->eval(gt->T(), cs, sn);
    CHECK(cs == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::fabs(sn) < 1e-8);
  }

  // A over one period: 2 pi / (m n) for odd pairs, zero with an even one.
  CHECK(GenTrig::get(3, 1)->A_period() ==
        doctest::Approx(2.0 * M_PI / 3.0).epsilon(1e-8));
  CHECK(GenTrig::get(3, 3)->A_period() ==
        doctest::Approx(2.0 * M_PI / 9.0).epsilon(1e-8));
  CHECK(GenTrig::get(5, 3)->A_period() ==
        doctest::Approx(2.0 * M_PI / 15.0).epsilon(1e-8));
  CHECK(std::fabs(GenTrig::get(2, 1)->A_period()) <= 1e-8);

  // Parity and period additivity of A.
  const auto g31 = GenTrig::get(3, 1);
  std::uniform_real_distribution<double> us(0.0, 10.0);
  for (int i = 0; i < 20; ++i) {
    const double phi = us(rng);
    double cp, sp, cm, sm;
    g31->eval(phi, cp, sp);
    g31->eval(-phi, cm, sm);
    CHECK(cm == doctest::Approx(cp).epsilon(1e-9));
    CHECK(sm == doctest::Approx(-sp).epsilon(1e-9));
    CHECK(g31->A(phi + g31->T()) ==
          doctest::Approx(g31->A(phi) + g31->A_period()).epsilon(1e-9));
  }

  // Period formula against an independent first-return time.
  const double ret = oracle::first_return_time(3, 1, g31->T());
  CHECK(ret == doctest::Approx(g31->T()).epsilon(1e-7));
}

TEST_CASE("generalized closed form") {
  // m = n: the generalized trajectory is the classical one; compare the
  // positive x-axis crossing radii through the same Cartesian point.
  {
    const double x0 = 0.09;
    SpiralNN std3(FocusParams(3, 3, 1, -1), x0, 0.0);
    SpiralMN gen3(FocusParams(3, 3, 1, -1), std::cbrt(x0), 0.0);
    const double T = gen3.trig().T();
    for (int j = 1; j <= 5; ++j) {
      const double want = std3.r(2.0 * M_PI * j);
      const double got = ipow(gen3.r(j * T), 3);
      CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
  }

  // Radius against a 1D ODE driven by the trig pair alone.
  {
    FocusParams p(3, 1, 1, -1);
    SpiralMN sp(p, 0.8, 0.0);
    const auto gt = GenTrig::get(3, 1);
    auto f = [&](double phi, const double* y, double* dy) {
      double cs, sn;
      gt->eval(phi, cs, sn);
      dy[0] = p.sign * ipow(sn, p.n - 1) * ipow(cs, p.m - 1) *
              ipow(y[0], 2 * p.m * p.n * p.k + 1);
    };
    OdeOptions opt;
    opt.rel_tol = 1e-11;
    opt.abs_tol = 1e-200;
    opt.record = false;
    const double want = ode_integrate(f, {0.8}, 0.0, 7.5, opt).y_end[0];
    CHECK(sp.r(7.5) == doctest::Approx(want).epsilon(1e-9));
  }

  // Tangency: the curve's finite-difference tangent is parallel to the
  // field at every sampled point.
  for (auto cfg : std::vector<std::array<int, 4>>{
           {3, 1, 1, -1}, {5, 3, 2, -1}, {3, 3, 1, -1}}) {
    FocusParams p(cfg[0], cfg[1], cfg[2], cfg[3]);
    SpiralMN sp(p, 0.8, 0.0);
    const double h = 1e-5;
    for (int i = 0; i < 40; ++i) {
      const double phi = 0.21 * i;
      double xa, ya, xb, yb, x, y;
      sp.point(phi - h, xa, ya);
      sp.point(phi + h, xb, yb);
      sp.point(phi, x, y);
      const double tx = (xb - xa) / (2.0 * h), ty = (yb - ya) / (2.0 * h);
      double fx, fy;
      field2d(p, x, y, fx, fy);
      const double cross = fx * ty - fy * tx;
      const double scale = std::hypot(fx, fy) * std::hypot(tx, ty);
      CHECK(std::fabs(cross) <= 1e-6 * scale);
      CHECK(fx * tx + fy * ty > 0.0);  // same orientation, not just parallel
    }
  }

  // Unstable branches expire at a finite forward angle.
  {
    SpiralMN sp(FocusParams(3, 1, 1, 1), 0.5, 0.0);
    CHECK(sp.r(20.0) > 0.0);
    CHECK_THROWS_AS(sp.r(30.0), DomainError);
  }
}

TEST_CASE("planar field values") {
  double dx, dy;
  field2d(FocusParams(1, 1, 0, -1), 1.0, 0.0, dx, dy);
  CHECK(dx == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(dy == doctest::Approx(1.0).epsilon(1e-15));

  // n = 1, k = 0: x' = -y + sign x, y' = x + sign y.
  field2d(FocusParams(1, 1, 0, -1), 0.3, -0.7, dx, dy);
  CHECK(dx == doctest::Approx(0.7 - 0.3).epsilon(1e-14));
  CHECK(dy == doctest::Approx(0.3 + 0.7).epsilon(1e-14));

  field2d(FocusParams(3, 3, 2, 1), 0.0, 1.0, dx, dy);
  CHECK(dx == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(dy == doctest::Approx(0.0).epsilon(1e-14));

  // Hand-expanded general pair at (1, 1) with m = 3, n = 1, k = 1.
  field2d(FocusParams(3, 1, 1, 1), 1.0, 1.0, dx, dy);
  CHECK(dx == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dy == doctest::Approx(9.0).epsilon(1e-14));
  field2d(FocusParams(3, 1, 1, -1), 1.0, 1.0, dx, dy);
  CHECK(dx == doctest::Approx(-3.0).epsilon(1e-14));
  CHECK(dy == doctest::Approx(-3.0).epsilon(1e-14));
}

TEST_CASE("three dimensional field") {
  for (auto pq : std::vector<std::array<double, 2>>{{1, 2}, {2, 3}}) {
    const double p0 = pq[0], q0 = pq[1];
    for (double t : {1.0, 2.5, 7.0}) {
      const double x = std::pow(t, -p0) * std::cos(t);
      const double y = std::pow(t, -q0) * std::sin(t);
      const double z = 1.0 / t;
      CHECK(std::fabs(invariant3d_residual(p0, q0, x, y, z)) <= 1e-13);

      // The field matches the curve tangent rescaled by t^{p0 - q0}.
      double f[3];
      field3d(p0, q0, x, y, z, f);
      const double s = std::pow(t, p0 - q0);
      const double dx = s * (-p0 * std::pow(t, -p0 - 1) * std::cos(t) -
                             std::pow(t, -p0) * std::sin(t));
      const double dyv = s * (-q0 * std::pow(t, -q0 - 1) * std::sin(t) +
                              std::pow(t, -q0) * std::cos(t));
      const double dz = s * (-1.0 / (t * t));
      CHECK(f[0] == doctest::Approx(dx).epsilon(1e-11));
      CHECK(f[1] == doctest::Approx(dyv).epsilon(1e-11));
      CHECK(f[2] == doctest::Approx(dz).epsilon(1e-11));
    }
  }

  // The surface is invariant under the flow itself.
  {
    const double p0 = 1.0, q0 = 2.0;
    auto f = [&](double, const double* y, double* dy) {
      field3d(p0, q0, y[0], y[1], y[2], dy);
    };
    OdeOptions opt;
    opt.rel_tol = 1e-10;
    opt.abs_tol = 1e-14;
    opt.record = false;
    std::vector<double> y0 = {std::cos(1.0), std::sin(1.0), 1.0};
    auto res = ode_integrate(f, y0, 0.0, 30.0, opt);
    CHECK(std::fabs(invariant3d_residual(p0, q0, res.y_end[0], res.y_end[1],
                                         res.y_end[2])) <= 1e-8);
  }

  double f[3];
  CHECK_THROWS_AS(field3d(1.0, 2.0, 0.1, 0.1, 0.0, f), DomainError);
  CHECK_THROWS_AS(invariant3d_residual(1.0, 2.0, 0.1, 0.1, -1.0),
                  DomainError);
}
