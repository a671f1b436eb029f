#pragma once
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace spiraldim {

struct PointCloud {
  std::vector<double> xs, ys;
  void add(double x, double y) {
    xs.push_back(x);
    ys.push_back(y);
  }
  std::size_t size() const { return xs.size(); }
};

// Grid origin offset; counts are taken on the lattice anchored at (ax, ay).
struct Anchor {
  double ax = 0.0, ay = 0.0;
};

// Lower-left corner of the cloud's bounding box: the default grid anchor,
// which makes counts covariant under uniform rescaling of cloud and eps.
Anchor corner_anchor(const PointCloud& pts);

// Packed cell index used across the counting code. Throws once an index
// leaves the 2^30 per-axis range.
std::uint64_t cell_key(long long ix, long long iy);

// Exact occupancy counter for streams far larger than memory would allow
// as raw points. Keys are packed cell indices; chunks are sorted, deduped
// and merged into a sorted base vector as they fill.
class StreamingCellCounter {
 public:
  explicit StreamingCellCounter(double eps, Anchor a = {},
                                std::size_t max_cells = 150000000);
  void add(double x, double y);
  void add_cell(long long ix, long long iy);
  std::uint64_t finish();  // unique occupied cells; counter is spent after
  double eps() const { return eps_; }

 private:
  void compact(bool final_pass);
  double eps_;
  Anchor anchor_;
  std::size_t max_cells_;
  std::vector<std::uint64_t> base_;   // sorted, deduped
  std::vector<std::uint64_t> chunk_;  // raw arrivals
  bool finished_ = false;
};

// Anchored at the bounding-box corner unless an explicit anchor is given.
std::uint64_t count_boxes(const PointCloud& pts, double eps);
std::uint64_t count_boxes(const PointCloud& pts, double eps, Anchor a);

struct CountSeries {
  std::vector<double> eps;
  std::vector<double> count;
};

struct CountOptions {
  int anchors = 5;  // random grid offsets; the median count is kept
  std::uint64_t seed = 12345;
  std::size_t max_cells = 150000000;
};

CountSeries count_series(const PointCloud& pts,
                         const std::vector<double>& epses,
                         const CountOptions& opt = {});

struct DimensionFit {
  double dimension = 0.0;
  double stderr_est = 0.0;  // least-squares error inflated by curvature
  double intercept = 0.0;
};

// Slope of log N against log(1/eps) over the entries with eps inside
// [eps_lo, eps_hi]. Needs at least four entries in the window.
DimensionFit fit_dimension(const CountSeries& s, double eps_lo, double eps_hi);

// Same fit over the middle two decades of the series (the endpoints of a
// computed series are polluted by the sampling floor and the bounding-box
// ceiling). Falls back to the whole series when trimming would leave
// fewer than four entries.
DimensionFit fit_dimension(const CountSeries& s);

// Parametric curve sampler: subdivides until every chord is at most
// eps/4 and the midpoint stays within eps/8 of the chord, so a count of
// the samples at width eps is a count of the curve.
PointCloud sample_adaptive(
    const std::function<void(double t, double& x, double& y)>& curve,
    double t0, double t1, double eps, std::size_t max_points = 80000000);

// Occupied eps-cells of {values} united with the accumulation point 0,
// lattice anchored at 0. The 0 cell is always counted.
std::uint64_t cover_1d(const std::vector<double>& values, double eps);

}  // namespace spiraldim
