#pragma once

#include <map>
#include <string>
#include <vector>

#include "spiraldim/boxcount.hpp"

namespace spiraldim {

// Lienard-type layer equation with a degenerate contact point of order
// 2n - 1 at the origin:
//
//   F(x) = -x^{2n-1} + sum_i f_i x^i,   degrees i >= 2n, finite support.
//
// The slow dynamics live on the critical curve y = x^{2n}; x_domain is the
// radius on which the sign pattern of F has been verified.
struct LienardModel {
  int n = 1;
  std::map<int, double> f;  // degree -> coefficient, every degree >= 2n
  double x_domain = 1.0;

  double F(double x) const;

  // Structural checks plus a sign scan: F < 0 on ]0, x_domain] and F > 0 on
  // [-x_domain, 0[. Throws DomainError when the model is unusable.
  void validate() const;
};

// Smallest k >= n with f_{2k} != 0; the even part of F decides which side of
// the entry-exit relation dominates. Throws InfiniteCodimension when every
// even coefficient vanishes.
int codimension(const LienardModel& m);

enum class Side { attracting, repelling };

// Slow divergence integral along the critical curve from the level's contact
// footpoint down to the contact point:
//
//   J(y) = int_{s y^{1/(2n)}}^{0} -(2n x^{2n-1})^2 / F(x) dx,  s = +/-1,
//
// attracting integrates over x > 0, repelling over x < 0. Always negative
// for valid levels. Throws DomainError when y exceeds x_domain^{2n} and
// FZero when F vanishes inside the interval.
double slow_div_integral(const LienardModel& m, double y, Side side);

// (J_- - J_+)(y) divided by its leading-order model
// -(8 n^2 / (2k+1)) f_{2k} y^{(2k+1)/(2n)}; tends to 1 as y -> 0+.
double asymptotic_ratio(const LienardModel& m, double y);

enum class Orientation { stable, unstable };

// Entry-exit orbit: strictly decreasing levels linked by the recursion
// J_-(y_{l+1}) = J_+(y_l) (unstable) or J_+(y_{l+1}) = J_-(y_l) (stable).
struct OrbitSequence {
  LienardModel model;
  std::vector<double> levels;
  Orientation orientation = Orientation::unstable;
};

// Runs the recursion from y0 until `count` levels exist. The orientation is
// the sign of (J_- - J_+)(y0); an ambiguous sign aborts with DomainError
// rather than guessing. Throws BracketFailure when the next level cannot be
// bracketed.
OrbitSequence generate_orbit(const LienardModel& m, double y0, int count);

// One horizontal interval of the chirp-like wave trace per level:
// [-y^{1/(2n)}, +y^{1/(2n)}] at height y.
struct ChirpInterval {
  double alpha_y;
  double omega_y;
  double level;
};

// The intervals are nested in x and decreasing in height; the two exponents
// classify the accumulation: delta1 = 1/(2n), delta2 = (2(k-n)+1)/(2n).
struct Chirp {
  std::vector<ChirpInterval> intervals;
  double delta1 = 0.0;
  double delta2 = 0.0;
};

Chirp build_chirp(const OrbitSequence& orbit);

// Box dimension of the level set {y_l} united with its accumulation point,
// fitted from a one-dimensional cover series. Needs >= 500 levels.
DimensionFit orbit_dimension(const OrbitSequence& orbit);

// Box dimension of the union of chirp intervals, fitted from exact
// horizontal-strip cell counts. Needs >= 500 intervals.
DimensionFit chirp_dimension(const Chirp& chirp);

// A model file is either JSON ({"n": .., "coefficients": [[degree, value],
// ..], "x_domain": .., "y0": .., "count": ..}) or key=value lines (n=,
// f<degree>=, x_domain=, y0=, count=; '#' comments). Throws ParseError on
// malformed input; semantic checks stay with LienardModel::validate.
struct ModelRun {
  LienardModel model;
  double y0 = 1e-2;
  int count = 1000;
};

ModelRun parse_model(const std::string& text);

}  // namespace spiraldim
