#include "spiraldim/roots.hpp"

#include <cmath>
#include <string>

#include "spiraldim/errors.hpp"

namespace spiraldim {

double solve_monotone(const std::function<double(double)>& f, double lo,
                      double hi, const RootOptions& opt) {
  if (lo > hi) std::swap(lo, hi);
  double flo = f(lo);
  if (flo == 0.0) return lo;
  double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw BadBracket("solve_monotone: f(" + std::to_string(lo) + ")=" +
                     std::to_string(flo) + ", f(" + std::to_string(hi) + ")=" +
                     std::to_string(fhi) + " do not bracket a root");
  bool last_was_secant = false;
  for (int it = 0; it < opt.max_iters; ++it) {
    double width = hi - lo;
    double x_tol =
        std::max(opt.x_tol_abs,
                 opt.x_tol_rel * std::max({std::abs(lo), std::abs(hi), 1.0}));
    if (width <= x_tol) break;
    double mid;
    // Secant proposal, accepted while it keeps landing strictly inside;
    // alternate with bisection so the bracket provably shrinks.
    double xs = lo - flo * (hi - lo) / (fhi - flo);
    bool use_secant = !last_was_secant && xs > lo + 0.01 * width &&
                      xs < hi - 0.01 * width;
    mid = use_secant ? xs : 0.5 * (lo + hi);
    last_was_secant = use_secant;
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  double width = hi - lo;
  double x_tol =
      std::max(opt.x_tol_abs,
               opt.x_tol_rel * std::max({std::abs(lo), std::abs(hi), 1.0}));
  if (width > 4.0 * x_tol)
    throw NonConvergence("solve_monotone: bracket width " +
                         std::to_string(width) + " after iteration budget");
  // Return the endpoint with the smaller residual.
  return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

}  // namespace spiraldim
