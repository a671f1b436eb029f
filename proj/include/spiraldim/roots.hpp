#pragma once
#include <functional>

namespace spiraldim {

struct RootOptions {
  double x_tol_rel = 4e-16;  // relative bracket width at which to stop
  double x_tol_abs = 0.0;
  int max_iters = 200;
};

// Finds a zero of f inside [lo, hi]. f(lo) and f(hi) must have opposite
// signs (or one of them be exactly zero) or BadBracket is thrown. Bisection
// with secant acceleration; the bracket never widens, so the result is
// robust for merely continuous f. Throws NonConvergence on iteration budget.
double solve_monotone(const std::function<double(double)>& f, double lo,
                      double hi, const RootOptions& opt = {});

}  // namespace spiraldim
