#pragma once
#include <functional>
#include <vector>

namespace spiraldim {

// dy must be filled with f(t, y); dim is fixed per integration call.
using OdeField = std::function<void(double t, const double* y, double* dy)>;

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  double h_init = 0.0;   // 0: choose from the first derivative evaluation
  double h_min = 1e-14;  // relative to interval length; below it: StepUnderflow
  double h_max = 0.0;    // 0: |t1 - t0|
  long max_steps = 4000000;
  // Applied to every accepted state (and the initial one); used to keep
  // states on a first integral's level set.
  std::function<void(double t, double* y)> project;
  // Integration halts after the first accepted state with stop(t, y) true.
  std::function<bool(double t, const double* y)> stop;
  bool record = true;  // keep accepted states
};

struct OdeResult {
  std::vector<double> t;       // accepted times (record=true)
  std::vector<double> states;  // flat, dim per accepted time
  double t_end = 0.0;          // last accepted time
  std::vector<double> y_end;   // last accepted state
  long steps_accepted = 0;
  long steps_rejected = 0;
  bool stopped = false;  // stop predicate fired before reaching t1
};

// Explicit embedded Dormand-Prince 5(4) pair with PI step control.
// Integrates from t0 to t1 (either direction), landing exactly on t1.
OdeResult ode_integrate(const OdeField& f, const std::vector<double>& y0,
                        double t0, double t1, const OdeOptions& opt = {});

}  // namespace spiraldim
