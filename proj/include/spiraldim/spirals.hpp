#pragma once
#include <memory>
#include <vector>

#include "spiraldim/quadrature.hpp"

namespace spiraldim {

// Planar focus family parameters. m == n selects the classical system
//   x' = -y^{2n-1} + sign * x^n y^{n-1} (x^{2n}+y^{2n})^k
//   y' =  x^{2n-1} + sign * x^{n-1} y^n (x^{2n}+y^{2n})^k
// and m != n its quasi-homogeneous generalization (n, m odd). Even degrees
// give a center, not a focus, and are rejected here.
struct FocusParams {
  int m, n, k;
  int sign;  // -1: stable (trajectories wind into the origin), +1: unstable
  FocusParams(int m_, int n_, int k_, int sign_);
};

// Coefficients of the radial Bernoulli equation r' + p r = q r^{2nk+1}
// along the angular variable of the classical (n, n) system.
struct PqCoeffs {
  double p, q;
};
PqCoeffs pq_coeffs(int n, int k, double phi);

// Mean winding coefficient K of I(phi) = K phi + P(phi); equals 2k.
double integral_K(int n, int k, const QuadOptions& opt = {});
// k = 0 variant; equals 1/n.
double integral_K0(int n, const QuadOptions& opt = {});

// (sin^{2n} phi + cos^{2n} phi)^{-1/(2n)}
double trig_factor(int n, double phi);

// I(phi) = K phi + P(phi) with P 2pi-periodic, cached on a uniform grid
// with Hermite interpolation (the integrand supplies exact node slopes).
class PeriodicPart {
 public:
  PeriodicPart(int n, int k, int grid = 4096);
  int n() const { return n_; }
  int k() const { return k_; }
  double K() const { return K_; }
  double P(double phi) const;
  double I(double phi) const { return K_ * phi + P(phi); }
  double P_max_abs() const { return p_max_abs_; }
  // Pure adaptive quadrature from 0, no cache; validation only.
  double direct_I(double phi) const;
  // Shared, thread-safe cache keyed by (n, k).
  static std::shared_ptr<const PeriodicPart> get(int n, int k);

 private:
  double integrand(double tau) const;
  int n_, k_, grid_;
  double K_;
  double p_max_abs_;
  std::vector<double> nodes_;  // cumulative I over [0, 2pi]
};

// Closed-form radius of the classical focus trajectory through (r0, phi0).
class SpiralNN {
 public:
  SpiralNN(const FocusParams& p, double r0, double phi0);
  // Radius at total winding angle phi. DomainError once the branch expires
  // (unstable spirals only live on a half line of angles).
  double r(double phi) const;
  double C() const { return C_; }
  const FocusParams& params() const { return p_; }
  const PeriodicPart& periodic() const { return *pp_; }
  double alpha() const;  // 1/(2nk), k >= 1
  // |r(phi) - r(phi + 2pi)| along the fixed ray, first order: the radial
  // gap between consecutive windings. k >= 1 only.
  double winding_gap_at(double r_here, double phi) const;

 private:
  FocusParams p_;
  double C_;
  std::shared_ptr<const PeriodicPart> pp_;
};

// Generalized trigonometric pair:
//   Cs' = -n Sn^{2n-1},  Sn' = m Cs^{2m-1},  (Cs, Sn)(0) = (1, 0),
// with first integral Cs^{2m} + Sn^{2n} = 1. Any m, n >= 1 (even degrees
// are allowed here; they are only rejected as focus parameters).
class GenTrig {
 public:
  GenTrig(int m, int n, int grid = 4096);
  int m() const { return m_; }
  int n() const { return n_; }
  double T() const { return T_; }
  void eval(double phi, double& cs, double& sn) const;
  // Also reports A(phi) = int_0^phi Sn^{n-1} Cs^{m-1} d tau.
  void eval_full(double phi, double& cs, double& sn, double& a) const;
  double A(double phi) const;
  double A_period() const { return a_period_; }  // 2pi/(mn) for odd pairs
  double Khat() const { return a_period_ / T_; }
  static std::shared_ptr<const GenTrig> get(int m, int n);

 private:
  void rhs(const double* y, double* dy) const;
  void project(double* y) const;
  int m_, n_, grid_;
  double T_, a_period_;
  std::vector<double> nodes_;  // (cs, sn, A) per grid node over [0, T]
};

// Period of (Cs, Sn) from the Beta-function formula.
double period_T(int m, int n);

// Closed-form radius of the generalized (n, m)-polar trajectory; the curve
// in Cartesian coordinates is (r^n Cs(phi), r^m Sn(phi)).
class SpiralMN {
 public:
  SpiralMN(const FocusParams& p, double r0, double phi0);
  double r(double phi) const;
  void point(double phi, double& x, double& y) const;
  double C() const { return C_; }
  const FocusParams& params() const { return p_; }
  const GenTrig& trig() const { return *gt_; }

 private:
  FocusParams p_;
  double C_;
  std::shared_ptr<const GenTrig> gt_;
};

// Right-hand sides.
void field2d(const FocusParams& p, double x, double y, double& dx, double& dy);
void field3d(double p0, double q0, double x, double y, double z, double* out);

// x^2 z^{-2 p0} + y^2 z^{-2 q0} - 1 on the invariant surface; z > 0.
double invariant3d_residual(double p0, double q0, double x, double y,
                            double z);

// Integer power helper shared by the closed forms.
double ipow(double b, int e);

}  // namespace spiraldim
