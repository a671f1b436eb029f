#pragma once
#include <cstdint>

#include "spiraldim/boxcount.hpp"
#include "spiraldim/spirals.hpp"

namespace spiraldim {

// Hybrid exact-occupancy counters for the infinite-winding curves whose
// box counts the generic sampler cannot reach: the windings are streamed
// only while they are resolvable at scale eps, and the merged core, where
// consecutive windings sit closer than the grid itself, is counted row by
// row from a proven winding-gap bound. Nothing anywhere near area/eps^2
// cells is ever stored.
struct HybridOptions {
  Anchor anchor{};
  // Truncation for cross-validation against the generic sampler: keep only
  // the part of the curve outside this radius (outside this z for the
  // spatial projection, above this x for chirp graphs). Must stay clear of
  // the merged core; 0 counts the full curve.
  double cut = 0.0;
  std::size_t max_cells = 150000000;  // budget for stored (streamed) cells
};

// Split of a hybrid count, for validation: cells seen by winding streams
// versus cells counted arithmetically in the merged core.
struct HybridDetail {
  std::uint64_t streamed = 0;
  std::uint64_t filled = 0;
};

// Trajectory of the planar degenerate focus through (r0, phi0). Either
// stability sign is accepted; the unstable mirror is counted in its
// reflected frame, which occupies a congruent cell set.
std::uint64_t count_spiral_nn(const FocusParams& p, double r0, double phi0,
                              double eps, const HybridOptions& opt = {},
                              HybridDetail* detail = nullptr);

// The power spiral r = phi^{-alpha} for phi >= phi_start > 0.
std::uint64_t count_power_spiral(double alpha, double phi_start, double eps,
                                 const HybridOptions& opt = {},
                                 HybridDetail* detail = nullptr);

// Graph of x^{d1} * sin(x^{-d2} + phase) over (0, x_max]. With transpose
// set, the reflected graph {(y, x)} is counted instead (the natural frame
// for coordinate-plane projections of spatial spirals).
std::uint64_t count_chirp_graph(double d1, double d2, double phase,
                                double x_max, bool transpose, double eps,
                                const HybridOptions& opt = {},
                                HybridDetail* detail = nullptr);

// The (x,y)-projection (z^{p0} cos(1/z), z^{q0} sin(1/z)) of the spatial
// elliptical spiral, followed from z = 1/t_start down to z -> 0.
std::uint64_t count_elliptical_xy(double p0, double q0, double t_start,
                                  double eps, const HybridOptions& opt = {},
                                  HybridDetail* detail = nullptr);

// Trajectory of the generalized (m,n) focus through r0 at phase 0,
// traced in the oval coordinates (r^n Cs, r^m Sn).
std::uint64_t count_oval_mn(const FocusParams& p, double r0, double eps,
                            const HybridOptions& opt = {},
                            HybridDetail* detail = nullptr);

}  // namespace spiraldim
