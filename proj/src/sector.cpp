#include "spiraldim/sector.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "spiraldim/bigfloat.hpp"
#include "spiraldim/errors.hpp"
#include "spiraldim/logreal.hpp"
#include "spiraldim/parallel.hpp"

namespace spiraldim {

namespace {

template <class R>
class Engine {
 public:
  Engine(const FocusParams& p, double r0, double phi0,
         const SectorOptions& opt)
      : p_(p), opt_(opt) {
    if (p.m != p.n)
      throw DomainError("sector estimator covers the m == n family");
    if (p.k < 1) throw DomainError("sector estimator needs k >= 1");
    if (opt.sectors < 1) throw DomainError("need at least one sector");
    if (!(opt.eps_log10 < 0.0))
      throw DomainError("neighborhood width must be below 1");
    if (!(r0 > 0.0)) throw DomainError("need r0 > 0");
    pp_ = PeriodicPart::get(p.n, p.k);
    two_pi_ = 2 * acos(R(-1));
    const int nk2 = 2 * p.n * p.k;
    alpha_ = R(1) / nk2;
    kexp_ = LogReal<R>::from_real(2.0 * p.k);  // exact winding rate
    eps_ = LogReal<R>::from_log10(opt.eps_log10);
    // Work in the frame where windings march outward in the angle; an
    // unstable focus is the mirror image of a stable one.
    const double phi0e = (p.sign < 0) ? phi0 : -phi0;
    const LogReal<R> head =
        LogReal<R>::from_real(r0 / trig_factor(p.n, phi0)).pow(R(-nk2));
    const LogReal<R> i0 =
        LogReal<R>::from_real(2.0 * p.k * phi0e + P_at(phi0e));
    C_ = head - i0;
    if (!(C_.sign() > 0))
      throw DomainError(
          "tail constant is not positive; start nearer the origin");
  }

  double dim_at(int j, SectorProbe* probe) const {
    const double phi_j = 2.0 * M_PI * j / opt_.sectors;
    const R phi_big = two_pi_ * j / opt_.sectors;
    const R s = sin(phi_big), c = cos(phi_big);
    const R tf = pow(pow(s, 2 * p_.n) + pow(c, 2 * p_.n),
                     R(-1) / (2 * p_.n));

    const LogReal<R> two_pi_lr = LogReal<R>::from_big(two_pi_);
    LogReal<R> k5 = C_ / kexp_;
    if (opt_.exact_winding_offset)
      k5 = k5 + LogReal<R>::from_real(phi_j) +
           LogReal<R>::from_real(P_at(phi_j)) / kexp_;
    k5 = k5 / two_pi_lr;

    const LogReal<R> k6 = kexp_.pow(-alpha_) * LogReal<R>::from_big(tf) *
                          two_pi_lr.pow(-alpha_);

    // Last winding the neighborhood still resolves: consecutive radii
    // along the ray phi_j stop being 2 eps apart beyond it.
    const LogReal<R> x =
        (LogReal<R>::from_big(alpha_) * k6 /
         (LogReal<R>::from_real(2.0) * eps_))
            .pow(R(1) / (alpha_ + 1));
    const LogReal<R> pre = x - k5;
    if (!(pre.sign() > 0)) {
      const double bound =
          (log(alpha_) + k6.ln_mag() - log(R(2)) -
           (alpha_ + 1) * k5.ln_mag())
              .template convert_to<double>() /
          std::log(10.0);
      throw EpsilonTooLarge(
          "every winding is already merged at this width; need eps_log10 "
          "below " +
          std::to_string(bound));
    }
    LogReal<R> k1 = pre;
    static const double ln_2_53 = 53.0 * std::log(2.0);
    if (static_cast<double>(pre.ln_mag()) < ln_2_53) {
      const double ceiled = std::ceil(pre.to_double());
      k1 = LogReal<R>::from_real(ceiled);
    }

    const LogReal<R> one = LogReal<R>::one();
    const LogReal<R> r_k1 = k6 * (k1 + k5).pow(-alpha_);
    const LogReal<R> strip = LogReal<R>::from_big(two_pi_ * 4 /
                                                  (2 * opt_.sectors));
    const LogReal<R> t1 = k6 *
                          ((k1 + one + k5).pow(1 - alpha_) -
                           k5.pow(1 - alpha_)) /
                          LogReal<R>::from_big(R(1) - alpha_) * strip * eps_;
    const LogReal<R> t2 = (k1 + one) * eps_ * eps_;
    const LogReal<R> t3 = r_k1 * r_k1 *
                          LogReal<R>::from_big(two_pi_ / 2) /
                          LogReal<R>::from_real(opt_.sectors);
    const LogReal<R> area = t1 + t2 + t3;

    const R dim = R(2) - area.ln_mag() / eps_.ln_mag();
    const double d = dim.template convert_to<double>();
    if (probe) {
      probe->dimension = d;
      probe->log10_area = area.log10_mag();
      probe->log10_k1 = k1.log10_mag();
      probe->log10_r_k1 = r_k1.log10_mag();
    }
    return d;
  }

  SectorResult run() const {
    SectorResult res;
    res.per_sector.assign(opt_.sectors, 0.0);
    parallel_for(opt_.sectors, opt_.workers, [this, &res](std::size_t j) {
      res.per_sector[j] = dim_at(static_cast<int>(j), nullptr);
    });
    res.dimension = res.per_sector[0];
    res.argmax_sector = 0;
    for (int j = 1; j < opt_.sectors; ++j)
      if (res.per_sector[j] > res.dimension) {
        res.dimension = res.per_sector[j];
        res.argmax_sector = j;
      }
    return res;
  }

 private:
  // Periodic remainder in the outward frame; odd reflection mirrors the
  // unstable spiral onto the stable layout.
  double P_at(double x) const {
    return (p_.sign < 0) ? pp_->P(x) : -pp_->P(-x);
  }

  FocusParams p_;
  SectorOptions opt_;
  std::shared_ptr<const PeriodicPart> pp_;
  R two_pi_, alpha_;
  LogReal<R> C_, eps_, kexp_;
};

void check_digits(int digits) {
  if (digits < 1 || digits > 100)
    throw DomainError("precision digits must lie in [1, 100]");
}

}  // namespace

SectorResult estimate_dimension(const FocusParams& p, double r0, double phi0,
                                const SectorOptions& opt) {
  check_digits(opt.digits);
  if (opt.digits <= 50) return Engine<Big50>(p, r0, phi0, opt).run();
  return Engine<Big100>(p, r0, phi0, opt).run();
}

SectorProbe sector_probe(const FocusParams& p, double r0, double phi0, int j,
                         const SectorOptions& opt) {
  check_digits(opt.digits);
  if (j < 0 || j >= opt.sectors) throw DomainError("sector index out of range");
  SectorProbe probe;
  if (opt.digits <= 50) {
    Engine<Big50>(p, r0, phi0, opt).dim_at(j, &probe);
  } else {
    Engine<Big100>(p, r0, phi0, opt).dim_at(j, &probe);
  }
  return probe;
}

}  // namespace spiraldim
