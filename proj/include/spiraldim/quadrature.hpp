#pragma once
#include <functional>

namespace spiraldim {

struct QuadOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-300;  // effectively pure relative control by default
  int max_evals = 400000;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  int panels = 0;
};

// Adaptive bisection with a fixed 15-point Gauss-Kronrod rule per panel;
// the panel with the largest error estimate is split until the summed
// estimate meets max(abs_tol, rel_tol*|value|). Throws NonConvergence when
// max_evals is exhausted first. a > b integrates with flipped sign.
QuadResult quad(const std::function<double(double)>& f, double a, double b,
                const QuadOptions& opt = {});

}  // namespace spiraldim
