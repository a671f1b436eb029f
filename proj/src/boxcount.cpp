#include "spiraldim/boxcount.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "spiraldim/errors.hpp"

namespace spiraldim {

namespace {

constexpr long long kHalf = 1LL << 30;  // per-axis index bound
constexpr std::size_t kChunk = std::size_t(1) << 23;

}  // namespace

std::uint64_t cell_key(long long ix, long long iy) {
  if (ix <= -kHalf || ix >= kHalf || iy <= -kHalf || iy >= kHalf)
    throw DomainError("cell index beyond 2^30; coarsen eps or recenter");
  return (static_cast<std::uint64_t>(ix + kHalf) << 31) |
         static_cast<std::uint64_t>(iy + kHalf);
}

Anchor corner_anchor(const PointCloud& pts) {
  Anchor a;
  if (pts.size() == 0) return a;
  a.ax = *std::min_element(pts.xs.begin(), pts.xs.end());
  a.ay = *std::min_element(pts.ys.begin(), pts.ys.end());
  return a;
}

StreamingCellCounter::StreamingCellCounter(double eps, Anchor a,
                                           std::size_t max_cells)
    : eps_(eps), anchor_(a), max_cells_(max_cells) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (max_cells_ < 1024) throw DomainError("cell budget too small");
  chunk_.reserve(kChunk);
}

void StreamingCellCounter::add(double x, double y) {
  add_cell(static_cast<long long>(std::floor((x - anchor_.ax) / eps_)),
           static_cast<long long>(std::floor((y - anchor_.ay) / eps_)));
}

void StreamingCellCounter::add_cell(long long ix, long long iy) {
  if (finished_) throw DomainError("counter already finished");
  chunk_.push_back(cell_key(ix, iy));
  if (chunk_.size() >= kChunk) compact(false);
}

void StreamingCellCounter::compact(bool) {
  std::sort(chunk_.begin(), chunk_.end());
  chunk_.erase(std::unique(chunk_.begin(), chunk_.end()), chunk_.end());
  const std::size_t old = base_.size();
  base_.insert(base_.end(), chunk_.begin(), chunk_.end());
  std::inplace_merge(base_.begin(), base_.begin() + old, base_.end());
  base_.erase(std::unique(base_.begin(), base_.end()), base_.end());
  chunk_.clear();
  if (base_.size() > max_cells_)
    throw MemoryBudget("occupied cells exceed the budget", eps_ * 2.0);
}

std::uint64_t StreamingCellCounter::finish() {
  if (finished_) throw DomainError("counter already finished");
  compact(true);
  finished_ = true;
  const std::uint64_t n = base_.size();
  base_.clear();
  base_.shrink_to_fit();
  return n;
}

std::uint64_t count_boxes(const PointCloud& pts, double eps, Anchor a) {
  StreamingCellCounter c(eps, a);
  for (std::size_t i = 0; i < pts.size(); ++i) c.add(pts.xs[i], pts.ys[i]);
  return c.finish();
}

std::uint64_t count_boxes(const PointCloud& pts, double eps) {
  return count_boxes(pts, eps, corner_anchor(pts));
}

CountSeries count_series(const PointCloud& pts,
                         const std::vector<double>& epses,
                         const CountOptions& opt) {
  if (opt.anchors < 1) throw DomainError("need at least one anchor");
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Anchor corner = corner_anchor(pts);
  CountSeries s;
  for (double eps : epses) {
    std::vector<double> counts;
    for (int a = 0; a < opt.anchors; ++a) {
      Anchor an = corner;
      if (a > 0) {
        an.ax += u(rng) * eps;
        an.ay += u(rng) * eps;
      }
      StreamingCellCounter c(eps, an, opt.max_cells);
      for (std::size_t i = 0; i < pts.size(); ++i)
        c.add(pts.xs[i], pts.ys[i]);
      counts.push_back(static_cast<double>(c.finish()));
    }
    std::sort(counts.begin(), counts.end());
    s.eps.push_back(eps);
    s.count.push_back(counts[counts.size() / 2]);
  }
  return s;
}

DimensionFit fit_dimension(const CountSeries& s, double eps_lo,
                           double eps_hi) {
  if (!(eps_lo > 0.0) || !(eps_hi >= eps_lo))
    throw DomainError("fit window must satisfy 0 < eps_lo <= eps_hi");
  std::vector<double> x, y;
  const double lo = eps_lo * (1.0 - 1e-12), hi = eps_hi * (1.0 + 1e-12);
  for (std::size_t i = 0; i < s.eps.size(); ++i) {
    if (s.eps[i] < lo || s.eps[i] > hi) continue;
    x.push_back(std::log(1.0 / s.eps[i]));
    y.push_back(std::log(s.count[i]));
  }
  const std::size_t n = x.size();
  if (n < 4) throw WindowTooNarrow("need at least four count entries");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw WindowTooNarrow("eps values are all equal");
  DimensionFit f;
  f.dimension = sxy / sxx;
  f.intercept = my - f.dimension * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.dimension * x[i]);
    ss += r * r;
  }
  const double se =
      (n > 2) ? std::sqrt(ss / (n - 2) / sxx) : 0.0;

  // Quadratic term in the centered variable measures log-log bending;
  // fold it into the reported uncertainty instead of hiding it.
  double s2 = 0, s3 = 0, s4 = 0, q1 = 0, q2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xc = x[i] - mx, yc = y[i] - my;
    s2 += xc * xc;
    s3 += xc * xc * xc;
    s4 += xc * xc * xc * xc;
    q1 += xc * yc;
    q2 += xc * xc * yc;
  }
  // Solve [s2 s3; s3 s4] [b c] = [q1 q2] for the quadratic coefficient c.
  const double det = s2 * s4 - s3 * s3;
  double c2 = 0.0;
  if (det != 0.0) c2 = (s2 * q2 - s3 * q1) / det;
  double xmin = x[0], xmax = x[0];
  for (double xv : x) {
    xmin = std::min(xmin, xv);
    xmax = std::max(xmax, xv);
  }
  f.stderr_est = std::hypot(se, std::fabs(c2) * (xmax - xmin) / 2.0);
  return f;
}

DimensionFit fit_dimension(const CountSeries& s) {
  if (s.eps.size() < 4) throw WindowTooNarrow("need at least four count entries");
  double le_min = std::log10(s.eps[0]), le_max = le_min;
  for (double e : s.eps) {
    if (!(e > 0.0)) throw DomainError("eps must be positive");
    le_min = std::min(le_min, std::log10(e));
    le_max = std::max(le_max, std::log10(e));
  }
  const double mid = 0.5 * (le_min + le_max);
  const double wlo = std::max(le_min, mid - 1.0), whi = std::min(le_max, mid + 1.0);
  std::size_t kept = 0;
  for (double e : s.eps) {
    const double le = std::log10(e);
    if (le >= wlo - 1e-12 && le <= whi + 1e-12) ++kept;
  }
  if (kept < 4) return fit_dimension(s, std::pow(10.0, le_min), std::pow(10.0, le_max));
  return fit_dimension(s, std::pow(10.0, wlo), std::pow(10.0, whi));
}

PointCloud sample_adaptive(
    const std::function<void(double t, double& x, double& y)>& curve,
    double t0, double t1, double eps, std::size_t max_points) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  struct Seg {
    double t0, x0, y0, t1, x1, y1;
  };
  PointCloud pc;
  double xa, ya, xb, yb;
  curve(t0, xa, ya);
  curve(t1, xb, yb);
  pc.add(xa, ya);
  std::vector<Seg> stack;
  stack.push_back({t0, xa, ya, t1, xb, yb});
  const double chord_max = eps / 4.0, dev_max = eps / 8.0;
  while (!stack.empty()) {
    const Seg s = stack.back();
    stack.pop_back();
    const double tm = 0.5 * (s.t0 + s.t1);
    double xm, ym;
    curve(tm, xm, ym);
    const double chord = std::hypot(s.x1 - s.x0, s.y1 - s.y0);
    const double dev = std::hypot(xm - 0.5 * (s.x0 + s.x1),
                                  ym - 0.5 * (s.y0 + s.y1));
    const bool flat = chord <= chord_max && dev <= dev_max;
    if (flat || tm == s.t0 || tm == s.t1) {
      pc.add(xm, ym);
      pc.add(s.x1, s.y1);
      if (pc.size() > max_points)
        throw BudgetExceeded("sampler point budget exhausted");
      continue;
    }
    stack.push_back({tm, xm, ym, s.t1, s.x1, s.y1});
    stack.push_back({s.t0, s.x0, s.y0, tm, xm, ym});
  }
  return pc;
}

std::uint64_t cover_1d(const std::vector<double>& values, double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  std::vector<long long> cells;
  cells.reserve(values.size() + 1);
  cells.push_back(0);  // the accumulation point is part of the covered set
  for (double v : values)
    cells.push_back(static_cast<long long>(std::floor(v / eps)));
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells.size();
}

}  // namespace spiraldim
