#pragma once
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "spiraldim/bigfloat.hpp"
#include "spiraldim/errors.hpp"

namespace spiraldim {

// Signed real carried as sign * exp(lg) with lg in extended precision.
// Magnitudes like 1e-10000 or 1e9000 stay exact to ~R digits while all
// arithmetic happens on logs. Addition uses log-sum-exp; a term whose log
// is more than kDropLn below the other is dropped outright, and a
// subtraction that would cancel past the precision budget throws
// CancellationError instead of returning noise.
template <class R>
class LogReal {
 public:
  // exp(-kDropLn) ~ 1e-60: far below every tolerance in this codebase but
  // far above the 1e-50/1e-100 representational floor, so dropping is a
  // deliberate, documented act rather than silent underflow.
  static constexpr double kDropLn = 138.155105579642881;  // 60 ln 10

  LogReal() : sign_(0), lg_(0) {}

  static LogReal zero() { return LogReal(); }
  static LogReal one() { return from_ln(R(0), +1); }

  static LogReal from_real(double v) {
    if (v == 0.0) return zero();
    if (!std::isfinite(v)) throw DomainError("LogReal: non-finite input");
    LogReal x;
    x.sign_ = v > 0 ? +1 : -1;
    x.lg_ = log(R(std::abs(v)));
    return x;
  }

  static LogReal from_big(const R& v) {
    if (v == 0) return zero();
    LogReal x;
    x.sign_ = v > 0 ? +1 : -1;
    x.lg_ = log(abs(v));
    return x;
  }

  static LogReal from_ln(const R& ln_mag, int sign) {
    if (sign == 0) return zero();
    LogReal x;
    x.sign_ = sign > 0 ? +1 : -1;
    x.lg_ = ln_mag;
    return x;
  }

  // 10^e, e.g. from_log10(-10000) is the estimator's working eps.
  static LogReal from_log10(double e) {
    static const R ln10 = log(R(10));
    return from_ln(R(e) * ln10, +1);
  }

  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }

  // ln |x|; DomainError on zero.
  const R& ln_mag() const {
    if (sign_ == 0) throw DomainError("LogReal: ln of zero");
    return lg_;
  }

  double to_double() const {
    if (sign_ == 0) return 0.0;
    static const R lmax = log(R(std::numeric_limits<double>::max()));
    if (lg_ > lmax)
      return sign_ > 0 ? std::numeric_limits<double>::infinity()
                       : -std::numeric_limits<double>::infinity();
    if (lg_ < -lmax) return 0.0;
    return sign_ * static_cast<double>(exp(lg_));
  }

  R to_big() const {
    if (sign_ == 0) return R(0);
    return R(sign_) * exp(lg_);
  }

  double log10_mag() const {
    static const R ln10 = log(R(10));
    return static_cast<double>(ln_mag() / ln10);
  }

  LogReal operator-() const {
    LogReal x = *this;
    x.sign_ = -x.sign_;
    return x;
  }

  LogReal abs_val() const {
    LogReal x = *this;
    if (x.sign_ < 0) x.sign_ = +1;
    return x;
  }

  LogReal operator*(const LogReal& o) const {
    if (sign_ == 0 || o.sign_ == 0) return zero();
    return from_ln(lg_ + o.lg_, sign_ * o.sign_);
  }

  LogReal operator/(const LogReal& o) const {
    if (o.sign_ == 0) throw DomainError("LogReal: division by zero");
    if (sign_ == 0) return zero();
    return from_ln(lg_ - o.lg_, sign_ * o.sign_);
  }

  // x^p for real p. Negative base requires integral p; zero base requires
  // p > 0.
  LogReal pow(const R& p) const {
    if (sign_ == 0) {
      if (p > 0) return zero();
      throw DomainError("LogReal: 0^p with p <= 0");
    }
    if (sign_ < 0) {
      R r = p - floor(p);
      if (r != 0) throw DomainError("LogReal: negative base, fractional power");
      bool odd = fmod(p, R(2)) != 0;
      return from_ln(lg_ * p, odd ? -1 : +1);
    }
    return from_ln(lg_ * p, +1);
  }

  LogReal pow(double p) const { return pow(R(p)); }

  LogReal operator+(const LogReal& o) const {
    if (sign_ == 0) return o;
    if (o.sign_ == 0) return *this;
    const LogReal *big = this, *small = &o;
    if (o.lg_ > lg_) std::swap(big, small);
    R d = big->lg_ - small->lg_;  // >= 0
    if (sign_ == o.sign_) {
      if (static_cast<double>(d) > kDropLn) return *big;
      return from_ln(big->lg_ + log1p(exp(-d)), big->sign_);
    }
    // Opposite signs: guarded cancellation.
    if (static_cast<double>(d) > kDropLn) return *big;
    R loss = -exp(-d);  // log1p argument in (-1, 0]
    R rel = R(1) + loss;  // 1 - e^{-d}, relative size of the result
    // Precision budget: digits10 of R minus a 10-digit guard band.
    static const R floor_rel =
        exp(R(-(std::numeric_limits<R>::digits10 - 10)) * log(R(10)));
    if (rel <= floor_rel)
      throw CancellationError(
          "LogReal: subtraction cancels past the precision budget "
          "(relative remainder " + std::to_string(static_cast<double>(rel)) +
          ")");
    return from_ln(big->lg_ + log1p(loss), big->sign_);
  }

  LogReal operator-(const LogReal& o) const { return *this + (-o); }

  bool operator<(const LogReal& o) const {
    if (sign_ != o.sign_) return sign_ < o.sign_;
    if (sign_ == 0) return false;
    if (sign_ > 0) return lg_ < o.lg_;
    return lg_ > o.lg_;
  }
  bool operator>(const LogReal& o) const { return o < *this; }

 private:
  int sign_;
  R lg_;
};

using LogReal50 = LogReal<Big50>;
using LogReal100 = LogReal<Big100>;

}  // namespace spiraldim
