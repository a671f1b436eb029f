#include "spiraldim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "spiraldim/errors.hpp"

namespace spiraldim {
namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1,1]; even nodes carry the
// embedded 7-point Gauss rule.
const double kXgk[15] = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

const double kWgk[15] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

const double kWg[7] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct Panel {
  double a, b;
  double value;
  double error;
};

struct PanelLess {
  bool operator()(const Panel& x, const Panel& y) const {
    return x.error < y.error;
  }
};

Panel evaluate(const std::function<double(double)>& f, double a, double b) {
  double c = 0.5 * (a + b);
  double h = 0.5 * (b - a);
  double gk = 0.0, g = 0.0;
  for (int i = 0; i < 15; ++i) {
    double fx = f(c + h * kXgk[i]);
    gk += kWgk[i] * fx;
    if (i % 2 == 1) g += kWg[i / 2] * fx;
  }
  gk *= h;
  g *= h;
  // Standard QUADPACK-style sharpened error estimate.
  double err = std::abs(gk - g);
  err = std::pow(200.0 * err, 1.5);
  double scale = std::abs(gk);
  if (scale > 0.0 && err > scale) err = scale;
  err = std::max(err, std::abs(gk - g));
  return Panel{a, b, gk, err};
}

}  // namespace

QuadResult quad(const std::function<double(double)>& f, double a, double b,
                const QuadOptions& opt) {
  if (a == b) return QuadResult{0.0, 0.0, 0, 0};
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::priority_queue<Panel, std::vector<Panel>, PanelLess> heap;
  Panel p0 = evaluate(f, a, b);
  int evals = 15;
  double total = p0.value;
  double toterr = p0.error;
  heap.push(p0);
  while (true) {
    double goal = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    if (toterr <= goal) break;
    if (evals + 30 > opt.max_evals)
      throw NonConvergence("quad: eval budget exhausted, error estimate " +
                           std::to_string(toterr));
    Panel worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval at floating point resolution; accept its estimate as is.
      heap.push(Panel{worst.a, worst.b, worst.value, 0.0});
      toterr -= worst.error;
      continue;
    }
    Panel left = evaluate(f, worst.a, mid);
    Panel right = evaluate(f, mid, worst.b);
    evals += 30;
    total += left.value + right.value - worst.value;
    toterr += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  QuadResult r;
  r.value = sign * total;
  r.error_estimate = toterr;
  r.evaluations = evals;
  r.panels = static_cast<int>(heap.size());
  return r;
}

}  // namespace spiraldim
