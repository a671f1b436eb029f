#include "spiraldim/catalog.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "json.hpp"
#include "spiraldim/errors.hpp"

namespace spiraldim {

namespace {

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

long long narrow(i128 v) {
  if (v > std::numeric_limits<long long>::max() ||
      v < std::numeric_limits<long long>::min())
    throw DomainError("rational overflow");
  return static_cast<long long>(v);
}

Rational make(i128 num, i128 den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(narrow(num), narrow(den));
}

}  // namespace

Rational::Rational(long long num, long long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const i128 g = gcd128(num, den);
  num_ = static_cast<long long>(num / static_cast<long long>(g ? g : 1));
  den_ = static_cast<long long>(den / static_cast<long long>(g ? g : 1));
}

double Rational::value() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
              i128(a.den_) * b.den_);
}
Rational operator-(const Rational& a, const Rational& b) {
  return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
              i128(a.den_) * b.den_);
}
Rational operator*(const Rational& a, const Rational& b) {
  return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
}
Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw DomainError("rational division by zero");
  return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
}
bool operator==(const Rational& a, const Rational& b) {
  return a.num_ == b.num_ && a.den_ == b.den_;
}
bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
bool operator<(const Rational& a, const Rational& b) {
  return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
}

namespace {

DimensionEstimate from_exact(Rational r, std::string method,
                             std::string family, std::string params) {
  DimensionEstimate e;
  e.value = r.value();
  e.exact = r;
  e.method = std::move(method);
  e.family = std::move(family);
  e.params = std::move(params);
  return e;
}

Rational clamp_line(const Rational& r) {
  // A curve's box dimension never drops below 1.
  const Rational one = Rational::integer(1);
  return (r < one) ? one : r;
}

void require_focus(int m, int n, int k) {
  if (m < 1 || n < 1 || m % 2 == 0 || n % 2 == 0)
    throw DomainError("focus degrees must be odd and >= 1");
  if (k < 0) throw DomainError("focus exponent k must be >= 0");
}

}  // namespace

DimensionEstimate dim_degenerate_nn(int n, int k) {
  require_focus(n, n, k);
  const std::string params = "n=" + std::to_string(n) + " k=" +
                             std::to_string(k);
  if (k == 0)
    return from_exact(Rational::integer(1), "analytic", "degenerate-focus",
                      params);
  const Rational d = Rational::integer(2) -
                     Rational(2, 2LL * n * k + 1);
  return from_exact(d, "analytic", "degenerate-focus", params);
}

DimensionEstimate dim_conjecture_mn(int m, int n, int k) {
  require_focus(m, n, k);
  const std::string params = "m=" + std::to_string(m) + " n=" +
                             std::to_string(n) + " k=" + std::to_string(k);
  if (k == 0)
    return from_exact(Rational::integer(1), "analytic", "degenerate-focus",
                      params);
  const Rational d =
      Rational::integer(2) -
      Rational(m + n, 1) / Rational(m * (2LL * n * k + 1), 1);
  return from_exact(clamp_line(d), (m == n) ? "analytic" : "conjecture",
                    "degenerate-focus", params);
}

DimensionEstimate dim_power_spiral(const Rational& alpha) {
  if (!(Rational::integer(0) < alpha))
    throw DomainError("power spiral needs alpha > 0");
  const Rational d = Rational::integer(2) /
                     (Rational::integer(1) + alpha);
  return from_exact(clamp_line(d), "analytic", "power-spiral",
                    "alpha=" + alpha.str());
}

DimensionEstimate dim_power_spiral(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("power spiral needs alpha > 0");
  DimensionEstimate e;
  e.value = std::max(1.0, 2.0 / (1.0 + alpha));
  e.method = "analytic";
  e.family = "power-spiral";
  e.params = "alpha=" + std::to_string(alpha);
  return e;
}

DimensionEstimate dim_chirp(const Rational& d1, const Rational& d2) {
  const Rational zero = Rational::integer(0);
  if (!(zero < d1) || !(zero < d2))
    throw DomainError("chirp needs positive exponents");
  const Rational one = Rational::integer(1);
  const Rational d = Rational::integer(2) - (d1 + one) / (d2 + one);
  return from_exact(clamp_line(d), "analytic", "chirp",
                    "d1=" + d1.str() + " d2=" + d2.str());
}

DimensionEstimate dim_chirp(double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0))
    throw DomainError("chirp needs positive exponents");
  DimensionEstimate e;
  e.value = std::max(1.0, 2.0 - (d1 + 1.0) / (d2 + 1.0));
  e.method = "analytic";
  e.family = "chirp";
  e.params = "d1=" + std::to_string(d1) + " d2=" + std::to_string(d2);
  return e;
}

DimensionEstimate dim_elliptical(const Rational& p0, const Rational& q0) {
  const Rational zero = Rational::integer(0);
  if (!(zero < p0) || q0 < p0)
    throw DomainError("spatial spiral needs 0 < p0 <= q0");
  const Rational one = Rational::integer(1);
  const Rational d = Rational::integer(2) - (p0 + q0) / (one + q0);
  return from_exact(clamp_line(d), "analytic", "spiral-3d",
                    "p0=" + p0.str() + " q0=" + q0.str());
}

DimensionEstimate dim_elliptical(double p0, double q0) {
  if (!(p0 > 0.0) || q0 < p0)
    throw DomainError("spatial spiral needs 0 < p0 <= q0");
  DimensionEstimate e;
  e.value = std::max(1.0, 2.0 - (p0 + q0) / (1.0 + q0));
  e.method = "analytic";
  e.family = "spiral-3d";
  e.params = "p0=" + std::to_string(p0) + " q0=" + std::to_string(q0);
  return e;
}

SlowFastDims dims_slowfast(int n, int k) {
  if (n < 1) throw DomainError("slow-fast needs n >= 1");
  if (k < n) throw DomainError("slow-fast codimension needs k >= n");
  SlowFastDims d;
  const long long kk = 2LL * k + 1, gap = 2LL * (k - n) + 1;
  d.orbit_dim = Rational(gap, kk);
  d.chirp_dim = Rational(4LL * k - 2 * n + 1, kk);
  d.level_decay = Rational(2LL * n, gap);
  d.gap_decay = Rational(kk, gap);
  d.delta1 = Rational(1, 2LL * n);
  d.delta2 = Rational(gap, 2LL * n);
  return d;
}

std::string to_json(const DimensionEstimate& e) {
  nlohmann::ordered_json j;
  j["value"] = e.value;
  if (e.exact) j["value_exact"] = e.exact->str();
  j["method"] = e.method;
  j["family"] = e.family;
  j["params"] = e.params;
  return j.dump();
}

}  // namespace spiraldim
