#include "spiraldim/curvecount.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "spiraldim/errors.hpp"
#include "spiraldim/ode.hpp"

namespace spiraldim {

namespace {

// Fill threshold: cells are counted arithmetically where consecutive
// windings sit closer than kFillGap * eps along every ray. Any cell fully
// inside that region contains a ray chord through its center of length
// >= eps > kFillGap * eps, hence a winding point.
constexpr double kFillGap = 0.95;

// The pairwise overlap accounting |c(w)| - |c(w) cap c(w-1)| equals the
// full inclusion-exclusion because each cell's windings form a consecutive
// run: winding w+1 plus the seam segment joining its endpoints is a closed
// curve separating winding w from winding w+2, so a connected cell meeting
// w and w+2 either meets w+1 or swallows the seam segment, and the latter
// needs two consecutive gaps inside one cell diagonal, which the fill
// boundary (streamed gaps >= kFillGap * eps) already excludes.

constexpr double kTwoPi = 6.283185307179586476925286766559;

double ip(double b, int e) { return ipow(b, e); }

// ---------------------------------------------------------------------------
// Polar spirals: r(phi) = tf(phi) * (K*phi + P(phi) + C)^(-alpha), covering
// both the degenerate-focus trajectories (tf, P from the focus family) and
// the bare power spirals (tf = 1, P = 0, K = 1).
// ---------------------------------------------------------------------------

constexpr int kTab = 1 << 15;  // shared angular tables over [0, 2*pi]

struct PolarModel {
  int n = 1;           // trig degree of the family
  double kp = 0.0;     // gap field exponent
  double gap_c = 0.0;  // gap(x,y) = gap_c * r * (x^{2n} + y^{2n})^{kp}
  double alpha = 0.0;
  double K = 0.0;
  double C = 0.0;
  double phi_begin = 0.0;  // start angle inside winding w0
  long long w0 = 0;        // first winding index
  double B0 = 0.0;         // B at the trajectory start
  bool has_tables = false;
  std::vector<double> tf, pp;  // kTab + 1 nodes, closing node included
  double slope_max = 0.0;      // sup |d ln r / d phi| over the trajectory
  double p_max = 0.0;          // sup |d ln tf / d phi|
  double di_max = 0.0;         // sup I'(phi); slope at offset B is
                               // p_max + alpha * di_max / B

  double tf_at(double phi) const {
    if (!has_tables) return 1.0;
    const double u = phi * (kTab / kTwoPi);
    const int j = std::min(static_cast<int>(u), kTab - 1);
    const double f = u - j;
    return tf[j] + f * (tf[j + 1] - tf[j]);
  }
  double pp_at(double phi) const {
    if (!has_tables) return 0.0;
    const double u = phi * (kTab / kTwoPi);
    const int j = std::min(static_cast<int>(u), kTab - 1);
    const double f = u - j;
    return pp[j] + f * (pp[j + 1] - pp[j]);
  }
  // Radius at base angle phi of winding w (absolute angle 2*pi*w + phi).
  double radius(long long w, double phi) const {
    const double B = K * (kTwoPi * w + phi) + pp_at(phi) + C;
    return tf_at(phi) * std::pow(B, -alpha);
  }
  double gap_at(double x, double y) const {
    const double r = std::hypot(x, y);
    const double s = ip(x * x, n) + ip(y * y, n);
    return gap_c * r * std::pow(s, kp);
  }
  // Boundary of the fill region along direction phi.
  double r_fill(double phi, double eps) const {
    double den = 1.0;
    if (n > 1) {
      const double c = std::cos(phi), s = std::sin(phi);
      den = ip(c * c, n) + ip(s * s, n);
    }
    return std::pow(kFillGap * eps / (gap_c * std::pow(den, kp)),
                    1.0 / (2.0 * n * kp + 1.0));
  }
};

PolarModel make_nn_model(const FocusParams& p, double r0, double phi0) {
  if (p.m != p.n)
    throw DomainError("grid counter covers the m == n focus family here");
  if (p.k < 1)
    throw DomainError(
        "k = 0 spirals have geometric gap decay; use the generic counter");
  PolarModel M;
  M.n = p.n;
  M.kp = static_cast<double>(p.k);
  M.gap_c = kTwoPi / p.n;
  M.alpha = 1.0 / (2.0 * p.n * p.k);
  M.K = 2.0 * p.k;
  const auto per = PeriodicPart::get(p.n, p.k);
  M.has_tables = true;
  M.tf.resize(kTab + 1);
  M.pp.resize(kTab + 1);
  const bool mirror = p.sign > 0;  // unstable: count the reflected frame
  for (int j = 0; j < kTab; ++j) {
    const double phi = kTwoPi * j / kTab;
    M.tf[j] = trig_factor(p.n, phi);
    M.pp[j] = mirror ? -per->P(-phi) : per->P(phi);
  }
  M.tf[kTab] = M.tf[0];
  M.pp[kTab] = M.pp[0];

  const double phis = mirror ? -phi0 : phi0;
  M.B0 = std::pow(r0 / trig_factor(p.n, phi0), -2.0 * p.n * p.k);
  M.C = M.B0 - M.K * phis - (mirror ? -per->P(-phis) : per->P(phis));
  M.w0 = static_cast<long long>(std::floor(phis / kTwoPi));
  M.phi_begin = phis - kTwoPi * M.w0;

  // sup |d ln r / d phi| = sup |p(phi) + alpha * I'(phi) / B|; I' is read
  // off the table, and B >= B0 along the trajectory.
  double pmax = 0.0, dimax = 0.0;
  for (int j = 0; j < kTab; ++j) {
    const double phi = kTwoPi * (j + 0.5) / kTab;
    pmax = std::max(pmax, std::fabs(pq_coeffs(p.n, p.k, phi).p));
    dimax = std::max(
        dimax, std::fabs(M.K + (M.pp[j + 1] - M.pp[j]) * (kTab / kTwoPi)));
  }
  M.p_max = pmax;
  M.di_max = dimax;
  M.slope_max = pmax + M.alpha * dimax / M.B0;
  return M;
}

PolarModel make_power_model(double alpha, double phi_start) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (!(phi_start > 0.0)) throw DomainError("phi_start must be positive");
  PolarModel M;
  M.n = 1;
  M.kp = 1.0 / (2.0 * alpha);
  M.gap_c = kTwoPi * alpha;
  M.alpha = alpha;
  M.K = 1.0;
  M.C = 0.0;  // B is the absolute angle itself, so the start sits at
              // polar angle phi_start, not at a rotated copy of it
  M.B0 = phi_start;
  M.w0 = static_cast<long long>(std::floor(phi_start / kTwoPi));
  M.phi_begin = phi_start - kTwoPi * M.w0;
  M.p_max = 0.0;
  M.di_max = 1.0;
  M.slope_max = alpha / phi_start;
  return M;
}

struct AngCell {
  std::uint64_t key;
  double phi;
};

// Exact occupancy of one polar spiral at one eps. Streams windings while
// they are resolvable and counts the merged core per row; double counting
// between streamed windings is removed via |c(w)| - |c(w) cap c(w-1)|,
// the full inclusion-exclusion because non-adjacent streamed windings are
// more than one cell diagonal apart.
std::uint64_t polar_count(const PolarModel& M, double eps,
                          const HybridOptions& opt, HybridDetail* detail) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const double slope_fac = std::sqrt(1.0 + M.slope_max * M.slope_max);

  const double ax = opt.anchor.ax, ay = opt.anchor.ay;
  const bool fill_active = (opt.cut == 0.0);

  // Direction-resolved fill boundary plus its maximum.
  std::vector<double> rfill(kTab + 1);
  for (int j = 0; j <= kTab; ++j) rfill[j] = M.r_fill(kTwoPi * j / kTab, eps);
  const double rf_max = *std::max_element(rfill.begin(), rfill.end());

  if (fill_active) {
    // Per-ray covering check. A fully inside cell holds a ray chord of
    // length >= eps ending at or below the boundary, and crossings below
    // the boundary are kFillGap * eps dense, so the chord misses every
    // crossing only if the first crossing below the boundary sits more
    // than one cell under it. Crossings are closed-form here; the first
    // one must also clear the boundary from above.
    const double phis = kTwoPi * M.w0 + M.phi_begin;
    for (int j = 0; j < kTab; j += 8) {
      const double chi = kTwoPi * j / kTab;
      const long long jmin =
          static_cast<long long>(std::ceil((phis - chi) / kTwoPi - 1e-12));
      const double rhof = rfill[j];
      if (M.radius(jmin, chi) <= rhof + 0.5 * eps)
        throw DomainError(
            "trajectory starts inside the merged zone at this eps; "
            "start it further out or coarsen eps");
      long long lo = jmin, hi = jmin + 1;
      while (M.radius(hi, chi) > rhof) hi += (hi - jmin + 1);
      while (hi > lo + 1) {
        const long long mid = lo + (hi - lo) / 2;
        (M.radius(mid, chi) > rhof ? lo : hi) = mid;
      }
      if (rhof - M.radius(hi, chi) > 0.97 * eps)
        throw DomainError(
            "winding spacing straddling the fill boundary exceeds one "
            "cell; coarsen eps");
    }
  } else if (opt.cut < rf_max + 3.0 * eps) {
    throw DomainError("cut radius reaches into the merged zone");
  }

  const auto inside_exact = [&](long long ix, long long iy) {
    const double x0 = ax + ix * eps, x1 = x0 + eps;
    const double y0 = ay + iy * eps, y1 = y0 + eps;
    const double xf = std::max(std::fabs(x0), std::fabs(x1));
    const double yf = std::max(std::fabs(y0), std::fabs(y1));
    return M.gap_at(xf, yf) <= kFillGap * eps;
  };
  // Scan inward from an estimate for the outermost fully inside cell.
  const auto edge_in = [&](long long& ix, long long iy, int dir) {
    for (int g = 0; g < 80; ++g) {
      if (inside_exact(ix, iy)) return true;
      ix += dir;
    }
    return false;
  };

  std::uint64_t filled = 0;
  if (fill_active) {
    const long long iy_lo =
        static_cast<long long>(std::floor((-rf_max - ay) / eps)) - 1;
    const long long iy_hi =
        static_cast<long long>(std::floor((rf_max - ay) / eps)) + 1;
    for (long long iy = iy_lo; iy <= iy_hi; ++iy) {
      const double y0 = ay + iy * eps, y1 = y0 + eps;
      const double yw = std::max(std::fabs(y0), std::fabs(y1));
      if (M.gap_at(0.0, yw) > kFillGap * eps) continue;  // row empty
      // largest |x| with the far corner still inside the fill region
      double lo = 0.0, hi = rf_max + 2.0 * eps;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (M.gap_at(mid, yw) <= kFillGap * eps ? lo : hi) = mid;
      }
      const double xw = lo;
      long long hi_ix = static_cast<long long>(std::floor((xw - ax) / eps)) + 3;
      long long lo_ix = static_cast<long long>(std::floor((-xw - ax) / eps)) - 3;
      if (!edge_in(hi_ix, iy, -1) || !edge_in(lo_ix, iy, +1)) continue;
      if (hi_ix >= lo_ix)
        filled += static_cast<std::uint64_t>(hi_ix - lo_ix + 1);
    }
  }

  // Radius table node count, fixed by doubling until the interpolation
  // error sits far below the grid scale. The first winding runs on its own
  // grid over [phi_begin, 2 pi] (the angle offset can vanish below the
  // entry angle); both it and the first full winding are verified, and
  // later windings are flatter (the offset grows), so these two are the
  // worst cases.
  const double span0 = kTwoPi - M.phi_begin;
  int nodes = 512;
  for (; nodes <= (1 << 21); nodes *= 2) {
    double err = 0.0;
    for (int j = 0; j < nodes; ++j) {
      const double a = M.phi_begin + span0 * j / nodes;
      const double b = a + span0 / nodes;
      const double lin = 0.5 * (M.radius(M.w0, a) + M.radius(M.w0, b));
      err = std::max(err, std::fabs(lin - M.radius(M.w0, 0.5 * (a + b))));
    }
    for (int j = 0; j < nodes; ++j) {
      const double a = kTwoPi * j / nodes, b = kTwoPi * (j + 1) / nodes;
      const double lin = 0.5 * (M.radius(M.w0 + 1, a) + M.radius(M.w0 + 1, b));
      err = std::max(err, std::fabs(lin - M.radius(M.w0 + 1, 0.5 * (a + b))));
    }
    if (err <= 0.01 * eps) break;
  }
  if (nodes > (1 << 21)) throw NonConvergence("radius table refinement");
  std::vector<double> R(nodes + 1);

  // Smallest K * phi + P(phi) reachable on a winding, seeding the
  // per-winding pitch bound; the table scan covers non-monotone P.
  double ip_min_full = 0.0, ip_min_head = M.K * M.phi_begin;
  if (M.has_tables) {
    ip_min_full = 1e300;
    ip_min_head = M.K * M.phi_begin + M.pp_at(M.phi_begin);
    for (int j = 0; j <= kTab; ++j) {
      const double phij = kTwoPi * j / kTab;
      const double v = M.K * phij + M.pp[j];
      ip_min_full = std::min(ip_min_full, v);
      if (phij >= M.phi_begin) ip_min_head = std::min(ip_min_head, v);
    }
    const double slack = M.di_max * (kTwoPi / kTab);
    ip_min_full -= slack;
    ip_min_head -= slack;
  }

  std::uint64_t total = 0;
  std::vector<AngCell> cur, prev;
  cur.reserve(1 << 16);
  prev.reserve(1 << 16);
  const double den_min = (M.n > 1) ? std::pow(2.0, 1.0 - M.n) : 1.0;
  int zero_streak = 0;
  std::uint64_t ring[32];
  for (long long w = M.w0;; ++w) {
    const double phi_a = (w == M.w0) ? M.phi_begin : 0.0;
    const double span = kTwoPi - phi_a;
    for (int j = 0; j <= nodes; ++j)
      R[j] = M.radius(w, phi_a + span * j / nodes);
    double r_max_w = 0.0, r_min_w = R[0];
    for (int j = 0; j <= nodes; ++j) {
      r_max_w = std::max(r_max_w, R[j]);
      r_min_w = std::min(r_min_w, R[j]);
    }
    if (opt.cut > 0.0 && r_max_w < opt.cut) break;

    // Endgame at coarse grids: once the winding fits inside the block of
    // cells whose closure holds the origin, the remaining tail stays there
    // and meets each of those cells through its ray crossings.
    {
      const long long oxp =
          static_cast<long long>(std::floor((1e-300 - ax) / eps));
      const long long oxm =
          static_cast<long long>(std::floor((-1e-300 - ax) / eps));
      const long long oyp =
          static_cast<long long>(std::floor((1e-300 - ay) / eps));
      const long long oym =
          static_cast<long long>(std::floor((-1e-300 - ay) / eps));
      if (-r_max_w >= ax + oxm * eps && r_max_w <= ax + (oxp + 1) * eps &&
          -r_max_w >= ay + oym * eps && r_max_w <= ay + (oyp + 1) * eps) {
        for (const long long qx : {oxm, oxp})
          for (const long long qy : {oym, oyp})
            if (!(fill_active && inside_exact(qx, qy))) {
              const std::uint64_t key = cell_key(qx, qy);
              bool seen = false;
              for (const AngCell& pc : prev)
                if (pc.key == key) {
                  seen = true;
                  break;
                }
              if (!seen) ++total;
            }
        break;
      }
    }

    // B must stay positive across the winding or the radius table is
    // poisoned; the start construction guarantees it, so this is a
    // tripwire for table or parameter corruption.
    const double b_min =
        M.K * (kTwoPi * w) + (w == M.w0 ? ip_min_head : ip_min_full) + M.C;
    if (!(b_min > 0.0)) throw DomainError("angle offset vanished on a winding");

    const double dphi = eps / (4.4 * r_max_w * slope_fac);
    const long long steps =
        static_cast<long long>(std::ceil((kTwoPi - phi_a) / dphi)) + 1;
    const double step = (kTwoPi - phi_a) / steps;
    const double cs = std::cos(step), sn = std::sin(step);

    cur.clear();
    std::uint64_t last_key = ~0ull;
    int ring_n = 0, ring_pos = 0;
    const auto emit = [&](long long ix, long long iy, double phi) {
      const std::uint64_t key = cell_key(ix, iy);
      for (int q = 0; q < ring_n; ++q)
        if (ring[q] == key) return;
      ring[ring_pos] = key;
      ring_pos = (ring_pos + 1) & 31;
      if (ring_n < 32) ++ring_n;
      if (fill_active) {
        const double xf = std::max(std::fabs(ax + ix * eps),
                                   std::fabs(ax + (ix + 1) * eps));
        const double yf = std::max(std::fabs(ay + iy * eps),
                                   std::fabs(ay + (iy + 1) * eps));
        const double r2f = xf * xf + yf * yf;
        int jr = static_cast<int>(phi * (kTab / kTwoPi));
        if (jr >= kTab) jr = kTab - 1;
        const double rf = rfill[jr];
        if (r2f < (rf - 2.5 * eps) * (rf - 2.5 * eps)) return;
        if (r2f <= (rf + 2.5 * eps) * (rf + 2.5 * eps) &&
            M.gap_at(xf, yf) <= kFillGap * eps)
          return;
      }
      cur.push_back({key, phi});
      if (cur.size() > opt.max_cells)
        throw MemoryBudget("winding cell list exceeds the budget", eps * 2.0);
    };
    const double inv_h = nodes / span;
    double c = std::cos(phi_a), s = std::sin(phi_a);
    bool have_prev = false;
    double px = 0.0, py = 0.0;
    long long pix = 0, piy = 0;
    for (long long i = 0; i <= steps; ++i) {
      const double phi = phi_a + i * step;
      if ((i & 4095) == 0) {
        c = std::cos(phi);
        s = std::sin(phi);
      }
      const double u = (phi - phi_a) * inv_h;
      int j = static_cast<int>(u);
      if (j >= nodes) j = nodes - 1;
      const double r = R[j] + (u - j) * (R[j + 1] - R[j]);
      if (!(opt.cut > 0.0 && r < opt.cut)) {
        const double x = r * c, y = r * s;
        const long long ix = static_cast<long long>(std::floor((x - ax) / eps));
        const long long iy = static_cast<long long>(std::floor((y - ay) / eps));
        const std::uint64_t key = cell_key(ix, iy);
        if (key != last_key) {
          // A diagonal index step means the chord clipped a corner cell;
          // adding it in traversal order keeps the occupancy exact even
          // where the curve grazes cells more shallowly than one chord.
          if (have_prev && ix != pix && iy != piy) {
            const double ex = ax + (ix > pix ? ix : pix) * eps;
            const double ey = ay + (iy > piy ? iy : piy) * eps;
            const double tx = (x != px) ? (ex - px) / (x - px) : 2.0;
            const double ty = (y != py) ? (ey - py) / (y - py) : 2.0;
            if (tx <= ty)
              emit(ix, piy, phi);
            else
              emit(pix, iy, phi);
          }
          emit(ix, iy, phi);
          last_key = key;
        }
        have_prev = true;
        px = x;
        py = y;
        pix = ix;
        piy = iy;
      } else {
        have_prev = false;
      }
      const double cn = c * cs - s * sn;
      s = s * cs + c * sn;
      c = cn;
    }

    // Same-winding seam duplicates: the wrap at phi = 0 can re-enter a
    // head cell when the local gap is below one cell diagonal.
    if (phi_a == 0.0 && !cur.empty()) {
      const double wnd = 8.0 * eps / std::max(r_min_w, 1e-300);
      std::size_t head_end = 0;
      while (head_end < cur.size() && cur[head_end].phi < wnd) ++head_end;
      std::size_t tail_beg = cur.size();
      while (tail_beg > head_end && cur[tail_beg - 1].phi > kTwoPi - wnd)
        --tail_beg;
      if (head_end > 0 && tail_beg < cur.size()) {
        std::size_t out = tail_beg;
        for (std::size_t t = tail_beg; t < cur.size(); ++t) {
          bool dup = false;
          for (std::size_t h = 0; h < head_end; ++h)
            if (cur[h].key == cur[t].key) {
              dup = true;
              break;
            }
          if (!dup) cur[out++] = cur[t];
        }
        cur.resize(out);
      }
    }

    // Overlap with the previous winding; skipped when the local gap keeps
    // the pair more than one cell diagonal apart everywhere.
    std::uint64_t overlap = 0;
    const double gap_min_pair = M.gap_c *
                                std::pow(r_min_w, 2.0 * M.n * M.kp + 1.0) *
                                std::pow(den_min, M.kp);
    if (!prev.empty() && !cur.empty() && gap_min_pair <= 2.6 * eps) {
      const double wnd = 8.0 * eps / std::max(r_min_w, 1e-300);
      std::size_t base = 0;
      std::size_t tail0 = prev.size();
      while (tail0 > 0 && prev[tail0 - 1].phi > kTwoPi - wnd) --tail0;
      for (const AngCell& cc : cur) {
        bool hit = false;
        while (base < prev.size() && prev[base].phi < cc.phi - wnd) ++base;
        for (std::size_t q = base;
             q < prev.size() && prev[q].phi <= cc.phi + wnd; ++q)
          if (prev[q].key == cc.key) {
            hit = true;
            break;
          }
        if (!hit && cc.phi < wnd) {
          // the seam: this winding's head continues the previous tail
          for (std::size_t q = tail0; q < prev.size(); ++q)
            if (prev[q].key == cc.key) {
              hit = true;
              break;
            }
        }
        if (hit) ++overlap;
      }
    }

    const std::uint64_t contrib = cur.size() - overlap;
    total += contrib;
    if (fill_active) {
      if (contrib == 0) {
        if (++zero_streak >= 2) break;
      } else {
        zero_streak = 0;
      }
    }
    std::swap(cur, prev);
  }

  if (detail) {
    detail->streamed = total;
    detail->filled = filled;
  }
  return total + filled;
}

}  // namespace

std::uint64_t count_spiral_nn(const FocusParams& p, double r0, double phi0,
                              double eps, const HybridOptions& opt,
                              HybridDetail* detail) {
  if (!(r0 > 0.0)) throw DomainError("r0 must be positive");
  return polar_count(make_nn_model(p, r0, phi0), eps, opt, detail);
}

std::uint64_t count_power_spiral(double alpha, double phi_start, double eps,
                                 const HybridOptions& opt,
                                 HybridDetail* detail) {
  return polar_count(make_power_model(alpha, phi_start), eps, opt, detail);
}

// ---------------------------------------------------------------------------
// Chirp graphs y = x^{d1} sin(x^{-d2} + phase) on (0, x_max].
// ---------------------------------------------------------------------------

std::uint64_t count_chirp_graph(double d1, double d2, double phase,
                                double x_max, bool transpose, double eps,
                                const HybridOptions& opt,
                                HybridDetail* detail) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw DomainError("need d1 > 0, d2 > 0");
  if (!(x_max > 0.0)) throw DomainError("x_max must be positive");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  // Source-frame anchors; a transposed count swaps the grid axes.
  const double sax = transpose ? opt.anchor.ay : opt.anchor.ax;
  const double say = transpose ? opt.anchor.ax : opt.anchor.ay;

  const auto amp = [&](double x) { return std::pow(x, d1); };
  const auto period = [&](double x) {
    return kTwoPi * std::pow(x, d2 + 1.0) / d2;
  };
  // Columns whose right edge x keeps period(x) <= 0.9 eps contain a full
  // oscillation, which sweeps every cell up to the local amplitude.
  const double x_m = std::min(
      std::pow(0.9 * eps * d2 / kTwoPi, 1.0 / (1.0 + d2)), 0.5 * x_max);
  const bool fill_active = (opt.cut == 0.0);
  if (!fill_active && opt.cut < 1.05 * x_m + 2.0 * eps)
    throw DomainError("cut reaches into the merged chirp zone");

  // The counter keys cells of the reported frame, so it carries the
  // caller's anchor; all geometry below works in the source frame, whose
  // grid swaps the anchor components when the axes are transposed.
  StreamingCellCounter cells(eps, opt.anchor, opt.max_cells);

  const long long ix0 = static_cast<long long>(std::floor((0.0 - sax) / eps));
  std::uint64_t filled = 0;
  double x_fill_end = 0.0;
  long long ix_fill_end = ix0 - 1;
  // Guaranteed rows of a merged column: the sweep of the last full
  // oscillation starting inside it.
  const auto col_rows = [&](long long ix, long long& lo, long long& hi) {
    const double a = std::max(sax + ix * eps, 0.0);
    const double b = sax + (ix + 1) * eps;
    if (b <= 0.0) return false;
    double xs;
    if (a == 0.0) {
      // the origin column always holds full oscillations near 0
      double lox = 0.0, hix = b;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lox + hix);
        (mid + period(mid) <= b ? lox : hix) = mid;
      }
      xs = lox;
      if (!(xs > 0.0)) return false;
    } else {
      if (b > x_m) return false;
      xs = b - period(b);
      if (xs < a) return false;
    }
    const double am = amp(xs);
    lo = static_cast<long long>(std::floor((-am - say) / eps));
    hi = static_cast<long long>(std::floor((am - say) / eps));
    return true;
  };
  if (fill_active) {
    for (long long ix = ix0;; ++ix) {
      long long lo, hi;
      if (!col_rows(ix, lo, hi)) break;
      filled += static_cast<std::uint64_t>(hi - lo + 1);
      x_fill_end = sax + (ix + 1) * eps;
      ix_fill_end = ix;
    }
  }
  const auto in_fill_cell = [&](long long ix, long long iy) {
    if (!fill_active) return false;
    if (ix < ix0 || ix > ix_fill_end) return false;
    long long lo, hi;
    if (!col_rows(ix, lo, hi)) return false;
    return iy >= lo && iy <= hi;
  };
  const auto emit_cell = [&](long long ix, long long iy) {
    if (!in_fill_cell(ix, iy)) {
      if (transpose)
        cells.add_cell(iy, ix);
      else
        cells.add_cell(ix, iy);
    }
  };
  // Segment supercover: chords are short enough that the cell index moves
  // by at most one per axis, so a diagonal index step clips exactly one
  // corner cell, decided by which grid edge the chord crosses first.
  bool have_prev = false;
  double px = 0.0, py = 0.0;
  long long pix = 0, piy = 0;
  const auto emit = [&](double x, double y) {
    const long long ix = static_cast<long long>(std::floor((x - sax) / eps));
    const long long iy = static_cast<long long>(std::floor((y - say) / eps));
    if (have_prev && ix != pix && iy != piy && std::llabs(ix - pix) == 1 &&
        std::llabs(iy - piy) == 1) {
      const double ex = sax + (ix > pix ? ix : pix) * eps;
      const double ey = say + (iy > piy ? iy : piy) * eps;
      const double tx = (x != px) ? (ex - px) / (x - px) : 2.0;
      const double ty = (y != py) ? (ey - py) / (y - py) : 2.0;
      if (tx <= ty)
        emit_cell(ix, piy);
      else
        emit_cell(pix, iy);
    }
    if (!have_prev || ix != pix || iy != piy) emit_cell(ix, iy);
    have_prev = true;
    px = x;
    py = y;
    pix = ix;
    piy = iy;
  };

  if (fill_active && x_fill_end > 0.0) {
    // Envelope arcs cover the sliver between the guaranteed sweep rows and
    // the true amplitude; every envelope cell holds a tangency point.
    const double x_stop = std::min(0.01 * eps, std::pow(0.01 * eps, 1.0 / d1));
    for (int sgn = -1; sgn <= 1; sgn += 2) {
      double x = x_fill_end;
      long long guard = 0;
      have_prev = false;
      while (x > x_stop && guard++ < 500000000) {
        emit(x, sgn * amp(x));
        const double sl = d1 * std::pow(x, d1 - 1.0);
        x -= 0.25 * eps / std::sqrt(1.0 + sl * sl);
      }
    }
  }

  // Resolved graph stream from the first unmerged column (or the cut).
  {
    double x = fill_active ? x_fill_end : opt.cut;
    if (!(x > 0.0)) x = 0.5 * eps;
    long long guard = 0;
    have_prev = false;
    while (x <= x_max && guard++ < 4000000000ll) {
      emit(x, amp(x) * std::sin(std::pow(x, -d2) + phase));
      const double sl =
          d1 * std::pow(x, d1 - 1.0) + d2 * std::pow(x, d1 - d2 - 1.0);
      x += 0.25 * eps / std::sqrt(1.0 + sl * sl);
    }
    emit(x_max, amp(x_max) * std::sin(std::pow(x_max, -d2) + phase));
  }

  const std::uint64_t streamed = cells.finish();
  if (detail) {
    detail->streamed = streamed;
    detail->filled = filled;
  }
  return streamed + filled;
}

// ---------------------------------------------------------------------------
// (x, y)-projection of the spatial elliptical spiral
// t -> (t^{-p0} cos t, t^{-q0} sin t).
// ---------------------------------------------------------------------------

std::uint64_t count_elliptical_xy(double p0, double q0, double t_start,
                                  double eps, const HybridOptions& opt,
                                  HybridDetail* detail) {
  if (!(p0 > 0.0) || !(p0 <= q0)) throw DomainError("need 0 < p0 <= q0");
  if (!(t_start > 1.0)) throw DomainError("t_start must exceed 1");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const double ax = opt.anchor.ax, ay = opt.anchor.ay;

  // Consecutive windings at height u = 1/t sit at most
  // 2 pi (p0 + q0) u^{p0+1} apart along any ray: rho along a ray obeys
  // rho' = rho^3 (cos^2 a'/a^3 + sin^2 b'/b^3) with a = u^{p0}, b = u^{q0},
  // and rho^2 cos^2 / a^2 <= 1 absorbs the oblique amplification.
  const double u_f =
      std::pow(kFillGap * eps / (kTwoPi * (p0 + q0)), 1.0 / (1.0 + p0));
  const bool fill_active = (opt.cut == 0.0);
  if (fill_active && u_f > 0.8 / (t_start + kTwoPi))
    throw DomainError(
        "trajectory starts inside the merged zone at this eps; "
        "increase t_start or coarsen eps");
  if (!fill_active && opt.cut < 1.25 * u_f)
    throw DomainError("cut reaches into the merged zone");
  if (q0 - p0 >= 2.0 * t_start)
    throw DomainError("polar angle may stall; increase t_start");

  const double A = std::pow(u_f, p0), Bq = std::pow(u_f, q0);

  if (fill_active) {
    // Per-ray covering check, as in the polar engine: the first winding
    // crossing below the fill boundary must sit within one cell of it.
    // The crossing radius is exact because the point at parameter t lies
    // on the level ellipse of u = 1/t; only the crossing parameter needs
    // a root find on the (monotone) polar angle.
    const auto rho_level = [&](double u, double cc, double ss) {
      return 1.0 / std::sqrt(cc * cc * std::pow(u, -2.0 * p0) +
                             ss * ss * std::pow(u, -2.0 * q0));
    };
    const auto cross_rho = [&](long long jw, double th, double cc, double ss) {
      const auto g = [&](double t) {
        return std::remainder(std::atan2(std::pow(t, -q0) * std::sin(t),
                                         std::pow(t, -p0) * std::cos(t)) -
                                  th,
                              kTwoPi);
      };
      const double T0 = t_start + kTwoPi * jw;
      for (int S = 64; S <= (1 << 16); S *= 4) {
        double tp = T0, gp = g(T0);
        for (int i2 = 1; i2 <= S; ++i2) {
          const double tc = T0 + kTwoPi * i2 / S;
          const double gc = g(tc);
          if (gp < 0.0 && gc >= 0.0) {
            double a2 = tp, b2 = tc;
            for (int it = 0; it < 48; ++it) {
              const double m2 = 0.5 * (a2 + b2);
              (g(m2) < 0.0 ? a2 : b2) = m2;
            }
            return rho_level(2.0 / (a2 + b2), cc, ss);
          }
          tp = tc;
          gp = gc;
        }
      }
      return -1.0;
    };
    const int nray = 2048;
    for (int jr = 0; jr < nray; ++jr) {
      const double th = kTwoPi * jr / nray;
      const double cc = std::cos(th), ss = std::sin(th);
      const double rf =
          1.0 / std::sqrt(cc * cc / (A * A) + ss * ss / (Bq * Bq));
      // Smallest winding whose crossing can dip below the boundary: the
      // crossing of winding j lies between the level radii at u_{j+1}
      // and u_j.
      long long lo2 = -1, hi2 = 0;
      while (rho_level(1.0 / (t_start + kTwoPi * (hi2 + 1)), cc, ss) >= rf)
        hi2 = 2 * hi2 + 2;
      while (hi2 > lo2 + 1) {
        const long long mid = lo2 + (hi2 - lo2) / 2;
        if (rho_level(1.0 / (t_start + kTwoPi * (mid + 1)), cc, ss) < rf)
          hi2 = mid;
        else
          lo2 = mid;
      }
      long long jc = hi2;
      if (jc < 1)
        throw DomainError(
            "trajectory starts inside the merged zone at this eps; "
            "increase t_start or coarsen eps");
      double rstar = -1.0;
      for (int tries = 0; tries < 6 && jc >= 0; ++tries, ++jc) {
        rstar = cross_rho(jc, th, cc, ss);
        if (rstar < 0.0 || rstar < rf) break;
      }
      if (rstar < 0.0 || rstar >= rf)
        throw DomainError("failed to bracket the fill boundary");
      if (rf - rstar > 0.97 * eps)
        throw DomainError(
            "winding spacing straddling the fill boundary exceeds one "
            "cell; coarsen eps");
    }
  }
  const auto inside_exact = [&](long long ix, long long iy) {
    const double x0 = ax + ix * eps, x1 = x0 + eps;
    const double y0 = ay + iy * eps, y1 = y0 + eps;
    const double xf = std::max(std::fabs(x0), std::fabs(x1)) / A;
    const double yf = std::max(std::fabs(y0), std::fabs(y1)) / Bq;
    return xf * xf + yf * yf <= 1.0;
  };
  const auto edge_in = [&](long long& ix, long long iy, int dir) {
    for (int g = 0; g < 80; ++g) {
      if (inside_exact(ix, iy)) return true;
      ix += dir;
    }
    return false;
  };

  std::uint64_t filled = 0;
  if (fill_active) {
    const long long iy_lo =
        static_cast<long long>(std::floor((-Bq - ay) / eps)) - 1;
    const long long iy_hi =
        static_cast<long long>(std::floor((Bq - ay) / eps)) + 1;
    for (long long iy = iy_lo; iy <= iy_hi; ++iy) {
      const double y0 = ay + iy * eps, y1 = y0 + eps;
      const double yf = std::max(std::fabs(y0), std::fabs(y1)) / Bq;
      if (yf > 1.0) continue;
      const double xw = A * std::sqrt(1.0 - yf * yf);
      long long hi_ix = static_cast<long long>(std::floor((xw - ax) / eps)) + 3;
      long long lo_ix = static_cast<long long>(std::floor((-xw - ax) / eps)) - 3;
      if (!edge_in(hi_ix, iy, -1) || !edge_in(lo_ix, iy, +1)) continue;
      if (hi_ix >= lo_ix)
        filled += static_cast<std::uint64_t>(hi_ix - lo_ix + 1);
    }
  }

  StreamingCellCounter cells(eps, opt.anchor, opt.max_cells);
  // Cells whose closure holds the origin; once a winding's bounding box
  // fits inside them the whole remaining tail does too, and it touches
  // each of them through its axis crossings.
  const long long oxp = static_cast<long long>(std::floor((1e-300 - ax) / eps));
  const long long oxm =
      static_cast<long long>(std::floor((-1e-300 - ax) / eps));
  const long long oyp = static_cast<long long>(std::floor((1e-300 - ay) / eps));
  const long long oym =
      static_cast<long long>(std::floor((-1e-300 - ay) / eps));
  int zero_streak = 0;
  for (double tw = t_start;; tw += kTwoPi) {
    if (opt.cut > 0.0 && 1.0 / tw < opt.cut) break;
    const double aw = std::pow(tw, -p0), bw = std::pow(tw, -q0);
    if (-aw >= ax + oxm * eps && aw <= ax + (oxp + 1) * eps &&
        -bw >= ay + oym * eps && bw <= ay + (oyp + 1) * eps) {
      for (const long long qx : {oxm, oxp})
        for (const long long qy : {oym, oyp})
          if (!(fill_active && inside_exact(qx, qy))) cells.add_cell(qx, qy);
      break;
    }
    const double pb = std::hypot(std::pow(tw, -p0) * (1.0 + p0 / tw),
                                 std::pow(tw, -q0) * (1.0 + q0 / tw));
    const long long steps =
        static_cast<long long>(std::ceil(kTwoPi * 4.4 * pb / eps)) + 1;
    const double step = kTwoPi / steps;

    // Per-winding amplitude tables, node count from the curvature of t^-p.
    const double curv = std::max(p0 * (p0 + 1.0), q0 * (q0 + 1.0)) *
                        std::pow(tw, -std::min(p0, q0) - 2.0);
    int nodes = static_cast<int>(
        std::ceil(kTwoPi * std::sqrt(curv / (8.0 * 0.005 * eps))));
    nodes = std::min(std::max(nodes, 64), 1 << 16);
    std::vector<double> TA(nodes + 1), TB(nodes + 1);
    for (int j = 0; j <= nodes; ++j) {
      const double t = tw + kTwoPi * j / nodes;
      TA[j] = std::pow(t, -p0);
      TB[j] = std::pow(t, -q0);
    }
    const double inv_h = nodes / kTwoPi;

    const double cs = std::cos(step), sn = std::sin(step);
    double c = std::cos(tw), s = std::sin(tw);
    bool any_out = false;
    std::uint64_t last_key = ~0ull;
    bool have_prev = false;
    double px = 0.0, py = 0.0;
    long long pix = 0, piy = 0;
    const auto emit = [&](long long qx, long long qy) {
      if (!(fill_active && inside_exact(qx, qy))) {
        cells.add_cell(qx, qy);
        any_out = true;
      }
    };
    for (long long i = 0; i <= steps; ++i) {
      const double tl = i * step;
      if ((i & 4095) == 0) {
        c = std::cos(tw + tl);
        s = std::sin(tw + tl);
      }
      if (opt.cut > 0.0 && 1.0 / (tw + tl) < opt.cut) break;
      const double uu = tl * inv_h;
      int j = static_cast<int>(uu);
      if (j >= nodes) j = nodes - 1;
      const double f = uu - j;
      const double x = (TA[j] + f * (TA[j + 1] - TA[j])) * c;
      const double y = (TB[j] + f * (TB[j + 1] - TB[j])) * s;
      const long long ix = static_cast<long long>(std::floor((x - ax) / eps));
      const long long iy = static_cast<long long>(std::floor((y - ay) / eps));
      const std::uint64_t key = cell_key(ix, iy);
      if (key != last_key) {
        last_key = key;
        // A diagonal index step means the chord clipped a corner cell;
        // the first grid edge crossed decides which one.
        if (have_prev && ix != pix && iy != piy) {
          const double ex = ax + (ix > pix ? ix : pix) * eps;
          const double ey = ay + (iy > piy ? iy : piy) * eps;
          const double tx = (x != px) ? (ex - px) / (x - px) : 2.0;
          const double ty = (y != py) ? (ey - py) / (y - py) : 2.0;
          if (tx <= ty)
            emit(ix, piy);
          else
            emit(pix, iy);
        }
        emit(ix, iy);
      }
      have_prev = true;
      px = x;
      py = y;
      pix = ix;
      piy = iy;
      const double cn = c * cs - s * sn;
      s = s * cs + c * sn;
      c = cn;
    }
    if (fill_active) {
      if (!any_out) {
        if (++zero_streak >= 2) break;
      } else {
        zero_streak = 0;
      }
    }
  }

  const std::uint64_t streamed = cells.finish();
  if (detail) {
    detail->streamed = streamed;
    detail->filled = filled;
  }
  return streamed + filled;
}

// ---------------------------------------------------------------------------
// Generalized (m, n) focus trajectories in oval coordinates:
// (r^n Cs(phi), r^m Sn(phi)) with r stepping down by the A-integral.
// ---------------------------------------------------------------------------

std::uint64_t count_oval_mn(const FocusParams& p, double r0, double eps,
                            const HybridOptions& opt, HybridDetail* detail) {
  if (!(r0 > 0.0) || r0 > 1.0) throw DomainError("need 0 < r0 <= 1");
  if (p.k < 1) throw DomainError("k = 0 ovals decay geometrically");
  if (p.sign > 0)
    throw DomainError("count the stable orientation; the mirror is congruent");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const double ax = opt.anchor.ax, ay = opt.anchor.ay;
  const int m = p.m, n = p.n;
  const double mnk2 = 2.0 * p.m * p.n * p.k;

  // Dense generalized-trig tables over one period, built in one pass of
  // node-to-node integrations.
  const auto G = GenTrig::get(m, n);
  const double T = G->T();
  constexpr int kMnTab = 1 << 14;
  std::vector<double> Cs(kMnTab + 1), Sn(kMnTab + 1), Ac(kMnTab + 1);
  {
    OdeField rhs = [m, n](double, const double* y, double* dy) {
      dy[0] = -n * ipow(y[1], 2 * n - 1);
      dy[1] = m * ipow(y[0], 2 * m - 1);
      dy[2] = ipow(y[1], n - 1) * ipow(y[0], m - 1);
    };
    OdeOptions oo;
    oo.rel_tol = 1e-12;
    oo.abs_tol = 1e-14;
    oo.record = false;
    std::vector<double> y = {1.0, 0.0, 0.0};
    Cs[0] = 1.0;
    Sn[0] = 0.0;
    Ac[0] = 0.0;
    for (int j = 1; j <= kMnTab; ++j) {
      const auto res =
          ode_integrate(rhs, y, T * (j - 1) / kMnTab, T * j / kMnTab, oo);
      y = res.y_end;
      Cs[j] = y[0];
      Sn[j] = y[1];
      Ac[j] = y[2];
    }
    if (std::hypot(Cs[kMnTab] - 1.0, Sn[kMnTab]) > 1e-8)
      throw NonConvergence("generalized trig tables fail to close");
  }
  const double a_period = Ac[kMnTab];
  const double inv_hT = kMnTab / T;
  const auto a_of = [&](double phi) {
    const double u = phi * inv_hT;
    int q = static_cast<int>(u);
    if (q >= kMnTab) q = kMnTab - 1;
    return Ac[q] + (u - q) * (Ac[q + 1] - Ac[q]);
  };

  const double C = std::pow(r0, -mnk2);
  const auto r_of = [&](double atot) {
    return std::pow(C + mnk2 * atot, -1.0 / mnk2);
  };

  // Ray gap bound: the quasi-radius of an oval point is r itself, its
  // per-period decrement is at most (2 pi / (m n)) r^{2mnk+1}, and the
  // ray-radius stretches that by at most sqrt(2) m n r^{n-1} / (2 pi / T).
  const double gap_c = 2.0 * std::sqrt(2.0) * M_PI / n;
  const double s_f = std::pow(kFillGap * eps / gap_c, 1.0 / (mnk2 + n));
  const bool fill_active = (opt.cut == 0.0);
  const double r_first_full = r_of(a_period);
  if (fill_active && s_f > 0.75 * r_first_full)
    throw DomainError(
        "trajectory starts inside the merged zone at this eps; "
        "start it further out or coarsen eps");
  if (!fill_active && opt.cut < 1.3 * s_f)
    throw DomainError("cut reaches into the merged zone");

  const double Axs = std::pow(s_f, n), Ays = std::pow(s_f, m);

  const auto cs_at = [&](double phi) {
    const double u = phi * inv_hT;
    int q = static_cast<int>(u);
    if (q >= kMnTab) q = kMnTab - 1;
    return Cs[q] + (u - q) * (Cs[q + 1] - Cs[q]);
  };
  const auto sn_at = [&](double phi) {
    const double u = phi * inv_hT;
    int q = static_cast<int>(u);
    if (q >= kMnTab) q = kMnTab - 1;
    return Sn[q] + (u - q) * (Sn[q + 1] - Sn[q]);
  };

  if (fill_active) {
    // Per-ray covering check. Level radii come from a monotone bisection
    // on the oval membership form; the crossing parameter from a sign
    // change of the signed ray-line distance, so table noise enters only
    // at component level and stays far below the cell scale.
    const auto rho_level = [&](double rq, double cc, double ss) {
      const double An = std::pow(rq, n), Am = std::pow(rq, m);
      double lo3 = 0.0, hi3 = 1.5 * std::max(An, Am);
      for (int it = 0; it < 64; ++it) {
        const double mid = 0.5 * (lo3 + hi3);
        const double xf = std::fabs(mid * cc) / An;
        const double yf = std::fabs(mid * ss) / Am;
        (ip(xf * xf, m) + ip(yf * yf, n) <= 1.0 ? lo3 : hi3) = mid;
      }
      return lo3;
    };
    const auto cross_rho = [&](long long w, double cc, double ss) {
      const double a0w = w * a_period;
      const auto pt = [&](double phi, double& px, double& py) {
        const double r = r_of(a0w + a_of(phi));
        px = std::pow(r, n) * cs_at(phi);
        py = std::pow(r, m) * sn_at(phi);
      };
      for (int S = 64; S <= (1 << 16); S *= 4) {
        double px, py;
        pt(0.0, px, py);
        double sp = py * cc - px * ss;
        double phip = 0.0;
        for (int i2 = 1; i2 <= S; ++i2) {
          const double phic = T * i2 / S;
          pt(phic, px, py);
          const double sc = py * cc - px * ss;
          if (sp < 0.0 && sc >= 0.0) {
            double a2 = phip, b2 = phic;
            for (int it = 0; it < 52; ++it) {
              const double m2 = 0.5 * (a2 + b2);
              pt(m2, px, py);
              ((py * cc - px * ss) < 0.0 ? a2 : b2) = m2;
            }
            pt(0.5 * (a2 + b2), px, py);
            const double proj = px * cc + py * ss;
            if (proj > 0.0) return proj;
          }
          sp = sc;
          phip = phic;
        }
      }
      return -1.0;
    };
    // Rays sit half a spacing off the oval vertices: a vertex ray crosses
    // each winding exactly at the period seam, where the table closure
    // noise can hold the signed distance on one side of zero.
    const int nray = 2048;
    for (int jr = 0; jr < nray; ++jr) {
      const double th = kTwoPi * (jr + 0.5) / nray;
      const double cc = std::cos(th), ss = std::sin(th);
      const double rf = rho_level(s_f, cc, ss);
      long long lo2 = -1, hi2 = 0;
      while (rho_level(r_of((hi2 + 1) * a_period), cc, ss) >= rf)
        hi2 = 2 * hi2 + 2;
      while (hi2 > lo2 + 1) {
        const long long mid = lo2 + (hi2 - lo2) / 2;
        if (rho_level(r_of((mid + 1) * a_period), cc, ss) < rf)
          hi2 = mid;
        else
          lo2 = mid;
      }
      long long jc = hi2;
      if (jc < 1)
        throw DomainError(
            "trajectory starts inside the merged zone at this eps; "
            "start it further out or coarsen eps");
      double rstar = -1.0;
      for (int tries = 0; tries < 6; ++tries, ++jc) {
        rstar = cross_rho(jc, cc, ss);
        if (rstar < 0.0 || rstar < rf) break;
      }
      if (rstar < 0.0 || rstar >= rf)
        throw DomainError("failed to bracket the fill boundary");
      if (rf - rstar > 0.97 * eps)
        throw DomainError(
            "winding spacing straddling the fill boundary exceeds one "
            "cell; coarsen eps");
    }
  }

  const auto inside_exact = [&](long long ix, long long iy) {
    const double x0 = ax + ix * eps, x1 = x0 + eps;
    const double y0 = ay + iy * eps, y1 = y0 + eps;
    const double xf = std::max(std::fabs(x0), std::fabs(x1)) / Axs;
    const double yf = std::max(std::fabs(y0), std::fabs(y1)) / Ays;
    return ip(xf * xf, m) + ip(yf * yf, n) <= 1.0;
  };
  const auto edge_in = [&](long long& ix, long long iy, int dir) {
    for (int g = 0; g < 80; ++g) {
      if (inside_exact(ix, iy)) return true;
      ix += dir;
    }
    return false;
  };

  std::uint64_t filled = 0;
  if (fill_active) {
    const long long iy_lo =
        static_cast<long long>(std::floor((-Ays - ay) / eps)) - 1;
    const long long iy_hi =
        static_cast<long long>(std::floor((Ays - ay) / eps)) + 1;
    for (long long iy = iy_lo; iy <= iy_hi; ++iy) {
      const double y0 = ay + iy * eps, y1 = y0 + eps;
      const double yf = std::max(std::fabs(y0), std::fabs(y1)) / Ays;
      if (yf > 1.0) continue;
      const double xw = Axs * std::pow(1.0 - ip(yf * yf, n), 1.0 / (2.0 * m));
      long long hi_ix = static_cast<long long>(std::floor((xw - ax) / eps)) + 3;
      long long lo_ix = static_cast<long long>(std::floor((-xw - ax) / eps)) - 3;
      if (!edge_in(hi_ix, iy, -1) || !edge_in(lo_ix, iy, +1)) continue;
      if (hi_ix >= lo_ix)
        filled += static_cast<std::uint64_t>(hi_ix - lo_ix + 1);
    }
  }

  StreamingCellCounter cells(eps, opt.anchor, opt.max_cells);
  // Cells whose closure holds the origin; once a winding's bounding box
  // fits inside them the whole remaining tail does too, and it touches
  // each of them through its axis crossings.
  const long long oxp = static_cast<long long>(std::floor((1e-300 - ax) / eps));
  const long long oxm =
      static_cast<long long>(std::floor((-1e-300 - ax) / eps));
  const long long oyp = static_cast<long long>(std::floor((1e-300 - ay) / eps));
  const long long oym =
      static_cast<long long>(std::floor((-1e-300 - ay) / eps));
  int zero_streak = 0;
  std::vector<double> Rn, Rm;
  int nodes = 256;
  for (long long w = 0;; ++w) {
    const double a0 = w * a_period;
    const double r_top = r_of(a0);
    if (opt.cut > 0.0 && r_top < opt.cut) break;
    const double bx = std::pow(r_top, n), by = std::pow(r_top, m);
    if (-bx >= ax + oxm * eps && bx <= ax + (oxp + 1) * eps &&
        -by >= ay + oym * eps && by <= ay + (oyp + 1) * eps) {
      for (const long long qx : {oxm, oxp})
        for (const long long qy : {oym, oyp})
          if (!(fill_active && inside_exact(qx, qy))) cells.add_cell(qx, qy);
      break;
    }

    // Per-winding tables of r^n and r^m, each verified at the midpoints
    // until interpolation error clears the grid scale. The oval's flat
    // edges can hug a row boundary for a long stretch, so the tolerance
    // stays well below a cell.
    const auto build = [&](int nds) {
      Rn.assign(nds + 1, 0.0);
      Rm.assign(nds + 1, 0.0);
      for (int j = 0; j <= nds; ++j) {
        const double r = r_of(a0 + a_of(T * j / nds));
        Rn[j] = std::pow(r, n);
        Rm[j] = std::pow(r, m);
      }
    };
    for (;; nodes *= 2) {
      if (nodes > (1 << 20)) throw NonConvergence("oval table refinement");
      build(nodes);
      double err = 0.0;
      for (int j = 0; j < nodes; ++j) {
        const double r = r_of(a0 + a_of(T * (j + 0.5) / nodes));
        err = std::max(err,
                       std::fabs(0.5 * (Rn[j] + Rn[j + 1]) - std::pow(r, n)));
        err = std::max(err,
                       std::fabs(0.5 * (Rm[j] + Rm[j + 1]) - std::pow(r, m)));
      }
      if (err <= 0.002 * eps) break;
    }
    const double pb = std::hypot(n * Rn[0], m * Rm[0]) *
                      (1.0 + std::pow(r_top, mnk2)) * 1.05;
    const long long steps =
        static_cast<long long>(std::ceil(T * 4.4 * pb / eps)) + 1;
    const double step = T / steps;
    const double inv_hn = nodes / T;
    bool any_out = false;
    std::uint64_t last_key = ~0ull;
    bool have_prev = false;
    double px = 0.0, py = 0.0;
    long long pix = 0, piy = 0;
    const auto emit = [&](long long qx, long long qy) {
      if (!(fill_active && inside_exact(qx, qy))) {
        cells.add_cell(qx, qy);
        any_out = true;
      }
    };
    for (long long i = 0; i <= steps; ++i) {
      const double phi = i * step;
      const double ut = phi * inv_hT;
      int q = static_cast<int>(ut);
      if (q >= kMnTab) q = kMnTab - 1;
      const double ft = ut - q;
      const double cv = Cs[q] + ft * (Cs[q + 1] - Cs[q]);
      const double sv = Sn[q] + ft * (Sn[q + 1] - Sn[q]);
      const double un = phi * inv_hn;
      int g = static_cast<int>(un);
      if (g >= nodes) g = nodes - 1;
      const double fg = un - g;
      const double rn = Rn[g] + fg * (Rn[g + 1] - Rn[g]);
      if (opt.cut > 0.0 && std::pow(rn, 1.0 / n) < opt.cut) {
        have_prev = false;
        continue;
      }
      const double x = rn * cv;
      const double y = (Rm[g] + fg * (Rm[g + 1] - Rm[g])) * sv;
      const long long ix = static_cast<long long>(std::floor((x - ax) / eps));
      const long long iy = static_cast<long long>(std::floor((y - ay) / eps));
      const std::uint64_t key = cell_key(ix, iy);
      if (key != last_key) {
        last_key = key;
        // A diagonal index step means the chord clipped a corner cell;
        // the first grid edge crossed decides which one.
        if (have_prev && ix != pix && iy != piy) {
          const double ex = ax + (ix > pix ? ix : pix) * eps;
          const double ey = ay + (iy > piy ? iy : piy) * eps;
          const double tx = (x != px) ? (ex - px) / (x - px) : 2.0;
          const double ty = (y != py) ? (ey - py) / (y - py) : 2.0;
          if (tx <= ty)
            emit(ix, piy);
          else
            emit(pix, iy);
        }
        emit(ix, iy);
      }
      have_prev = true;
      px = x;
      py = y;
      pix = ix;
      piy = iy;
    }
    if (fill_active) {
      if (!any_out) {
        if (++zero_streak >= 2) break;
      } else {
        zero_streak = 0;
      }
    }
  }

  const std::uint64_t streamed = cells.finish();
  if (detail) {
    detail->streamed = streamed;
    detail->filled = filled;
  }
  return streamed + filled;
}

}  // namespace spiraldim
