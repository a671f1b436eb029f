#pragma once
#include <optional>
#include <string>

namespace spiraldim {

// Exact fraction with 64-bit terms; every operation reduces and checks for
// overflow so catalog identities can be asserted exactly.
class Rational {
 public:
  Rational() = default;
  Rational(long long num, long long den);
  static Rational integer(long long n) { return Rational(n, 1); }
  long long num() const { return num_; }
  long long den() const { return den_; }
  double value() const;
  std::string str() const;  // "p/q", or "p" when q == 1

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b);
  friend bool operator!=(const Rational& a, const Rational& b);
  friend bool operator<(const Rational& a, const Rational& b);

 private:
  long long num_ = 0, den_ = 1;
};

struct DimensionEstimate {
  double value = 0.0;
  std::optional<Rational> exact;
  std::string method;  // "analytic" or "conjecture"
  std::string family;
  std::string params;
};

// Box dimension of the degenerate focus trajectory, m = n case (proved):
// 1 for k = 0, else 2 - 2/(2nk + 1).
DimensionEstimate dim_degenerate_nn(int n, int k);

// Conjectured value for the m != n generalization:
// 2 - (m + n)/(m (2nk + 1)); reduces to the proved value at m = n.
DimensionEstimate dim_conjecture_mn(int m, int n, int k);

// Power spiral r = phi^{-alpha}: max(1, 2/(1 + alpha)).
DimensionEstimate dim_power_spiral(double alpha);
DimensionEstimate dim_power_spiral(const Rational& alpha);

// Chirp graph x^{d1} sin(x^{-d2}) near 0: max(1, 2 - (d1+1)/(d2+1)).
DimensionEstimate dim_chirp(double d1, double d2);
DimensionEstimate dim_chirp(const Rational& d1, const Rational& d2);

// Spatial spiral (t^{-p0} cos t, t^{-q0} sin t, 1/t), 0 < p0 <= q0:
// max(1, 2 - (p0+q0)/(1+q0)).
DimensionEstimate dim_elliptical(double p0, double q0);
DimensionEstimate dim_elliptical(const Rational& p0, const Rational& q0);

// Exponents attached to the codimension-k slow-fast cycle family built on
// a degree 2n - 1 critical point.
struct SlowFastDims {
  Rational orbit_dim;    // of the level set on the slow axis
  Rational chirp_dim;    // of the associated entry-exit chirp graph
  Rational level_decay;  // y_l ~ l^{-level_decay}
  Rational gap_decay;    // (y_l - y_{l+1}) ~ l^{-gap_decay}
  Rational delta1, delta2;  // amplitude and frequency chirp exponents
};
SlowFastDims dims_slowfast(int n, int k);

std::string to_json(const DimensionEstimate& e);

}  // namespace spiraldim
