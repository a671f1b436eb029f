#include "spiraldim/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spiraldim/boxcount.hpp"
#include "spiraldim/catalog.hpp"
#include "spiraldim/curvecount.hpp"
#include "spiraldim/errors.hpp"
#include "spiraldim/parallel.hpp"
#include "spiraldim/report.hpp"
#include "spiraldim/sector.hpp"
#include "spiraldim/slowfast.hpp"
#include "spiraldim/spirals.hpp"
#include "spiraldim/version.hpp"

namespace spiraldim {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

struct Global {
  std::string out_dir = ".";
  int digits = 12;
  int workers = 0;
  std::uint64_t seed = 12345;
};

std::string out_path(const Global& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return (fs::path(g.out_dir) / name).string();
}

std::string num(double v, int digits) {
  std::ostringstream ss;
  ss << std::setprecision(digits) << v;
  return ss.str();
}

ojson est_json(const DimensionEstimate& e) { return ojson::parse(to_json(e)); }

ojson fit_json(const DimensionFit& f) {
  ojson j;
  j["dimension"] = f.dimension;
  j["stderr"] = f.stderr_est;
  j["intercept"] = f.intercept;
  return j;
}

ojson rational_json(const Rational& r) {
  ojson j;
  j["exact"] = r.str();
  j["value"] = r.value();
  return j;
}

// A numeric flag that accepts either a decimal or an exact fraction "p/q";
// the exact form flows into the catalog's rational overloads.
struct Ratio {
  double value = 0.0;
  std::optional<Rational> exact;
};

Ratio parse_ratio(const std::string& s) {
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const std::string a = s.substr(0, slash), b = s.substr(slash + 1);
    try {
      std::size_t pa = 0, pb = 0;
      const long long p = std::stoll(a, &pa), q = std::stoll(b, &pb);
      if (pa != a.size() || pb != b.size())
        throw ParseError("bad fraction: " + s);
      Ratio r;
      r.exact = Rational(p, q);
      r.value = r.exact->value();
      return r;
    } catch (const std::invalid_argument&) {
      throw ParseError("bad fraction: " + s);
    } catch (const std::out_of_range&) {
      throw ParseError("fraction out of range: " + s);
    }
  }
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty())
    throw ParseError("bad number: " + s);
  Ratio r;
  r.value = v;
  return r;
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void finish_report(RunReport& rep, const Global& g, const Timer& t,
                   const std::string& file) {
  rep.precision()["digits"] = g.digits;
  rep.precision()["seed"] = g.seed;
  rep.precision()["workers"] = g.workers;
  rep.set_timing_seconds(t.seconds());
  rep.write(out_path(g, file));
}

std::vector<double> eps_ladder(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi >= lo))
    throw DomainError("eps range must satisfy 0 < eps-lo <= eps-hi");
  if (per_decade < 1) throw DomainError("eps-per-decade must be >= 1");
  const int m =
      std::max(4, (int)std::lround(per_decade * std::log10(hi / lo)) + 1);
  std::vector<double> eps(m);
  for (int i = 0; i < m; ++i)
    eps[i] = hi * std::pow(lo / hi, m == 1 ? 0.0 : i / (m - 1.0));
  return eps;
}

DimensionFit fit_full(const CountSeries& s) {
  return fit_dimension(s, s.eps.back() * 0.99, s.eps.front() * 1.01);
}

// Least-squares slope of ln(values[l]) against ln(l) over [l_lo, l_hi).
double log_slope(const std::vector<double>& values, std::size_t l_lo,
                 std::size_t l_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t l = l_lo; l < l_hi && l < values.size(); ++l) {
    if (!(values[l] > 0.0)) continue;
    const double x = std::log((double)l), y = std::log(values[l]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 4) throw DomainError("not enough points for an exponent fit");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// analytic

struct AnalyticOpts {
  std::string family;
  int n = 1, m = 0, k = 1;
  std::string alpha = "1/2", d1 = "1/2", d2 = "1", p0 = "1/2", q0 = "1";
};

int cmd_analytic(const Global& g, const AnalyticOpts& o) {
  Timer timer;
  RunReport rep("analytic");
  rep.parameters()["family"] = o.family;

  DimensionEstimate est;
  if (o.family == "nn") {
    FocusParams p(o.n, o.n, o.k, -1);  // rejects even degrees (a center)
    est = dim_degenerate_nn(o.n, o.k);
    rep.parameters()["n"] = o.n;
    rep.parameters()["k"] = o.k;
  } else if (o.family == "mn-conjecture") {
    if (o.m < 1) throw DomainError("mn-conjecture needs --m");
    FocusParams p(o.m, o.n, o.k, -1);
    est = dim_conjecture_mn(o.m, o.n, o.k);
    rep.parameters()["m"] = o.m;
    rep.parameters()["n"] = o.n;
    rep.parameters()["k"] = o.k;
  } else if (o.family == "power") {
    const Ratio a = parse_ratio(o.alpha);
    est = a.exact ? dim_power_spiral(*a.exact) : dim_power_spiral(a.value);
    rep.parameters()["alpha"] = o.alpha;
  } else if (o.family == "chirp") {
    const Ratio d1 = parse_ratio(o.d1), d2 = parse_ratio(o.d2);
    est = (d1.exact && d2.exact) ? dim_chirp(*d1.exact, *d2.exact)
                                 : dim_chirp(d1.value, d2.value);
    rep.parameters()["d1"] = o.d1;
    rep.parameters()["d2"] = o.d2;
  } else if (o.family == "elliptical") {
    const Ratio p0 = parse_ratio(o.p0), q0 = parse_ratio(o.q0);
    est = (p0.exact && q0.exact) ? dim_elliptical(*p0.exact, *q0.exact)
                                 : dim_elliptical(p0.value, q0.value);
    rep.parameters()["p0"] = o.p0;
    rep.parameters()["q0"] = o.q0;
  } else if (o.family == "slowfast") {
    const SlowFastDims d = dims_slowfast(o.n, o.k);
    rep.parameters()["n"] = o.n;
    rep.parameters()["k"] = o.k;
    rep.results()["orbit_dim"] = rational_json(d.orbit_dim);
    rep.results()["chirp_dim"] = rational_json(d.chirp_dim);
    rep.results()["level_decay"] = rational_json(d.level_decay);
    rep.results()["gap_decay"] = rational_json(d.gap_decay);
    rep.results()["delta1"] = rational_json(d.delta1);
    rep.results()["delta2"] = rational_json(d.delta2);
    std::cout << "slowfast(n=" << o.n << ", k=" << o.k
              << "): orbit dim = " << d.orbit_dim.str() << " = "
              << num(d.orbit_dim.value(), g.digits)
              << ", chirp dim = " << d.chirp_dim.str() << " = "
              << num(d.chirp_dim.value(), g.digits)
              << ", level decay = " << d.level_decay.str()
              << ", gap decay = " << d.gap_decay.str() << "\n";
    finish_report(rep, g, timer, "analytic.json");
    return 0;
  } else {
    throw DomainError("unknown analytic family: " + o.family);
  }

  rep.results()["estimate"] = est_json(est);
  std::cout << est.family << "(" << est.params << "): dimension = ";
  if (est.exact) std::cout << est.exact->str() << " = ";
  std::cout << num(est.value, g.digits) << " [" << est.method << "]\n";
  finish_report(rep, g, timer, "analytic.json");
  return 0;
}

// ---------------------------------------------------------------------------
// estimate-sector

struct SectorOpts {
  int n = 1, k = 1;
  double r0 = 0.1, phi0 = 0.0;
  int L = 1000;
  double eps_log10 = -10000.0;
  int digits = 50;
};

int cmd_estimate_sector(const Global& g, const SectorOpts& o) {
  Timer timer;
  if (o.k == 0)
    throw DomainError(
        "k = 0: the dimension is analytically 1; the sector estimator needs "
        "k >= 1");
  FocusParams p(o.n, o.n, o.k, -1);
  SectorOptions opt;
  opt.sectors = o.L;
  opt.eps_log10 = o.eps_log10;
  opt.digits = o.digits;
  opt.workers = g.workers;
  const SectorResult res = estimate_dimension(p, o.r0, o.phi0, opt);
  const DimensionEstimate analytic = dim_degenerate_nn(o.n, o.k);

  RunReport rep("estimate-sector");
  rep.parameters()["n"] = o.n;
  rep.parameters()["k"] = o.k;
  rep.parameters()["r0"] = o.r0;
  rep.parameters()["phi0"] = o.phi0;
  rep.parameters()["L"] = o.L;
  rep.parameters()["eps0_log10"] = o.eps_log10;
  rep.precision()["sector_digits"] = o.digits;

  ojson per = ojson::array();
  CsvTable csv;
  csv.header = {"j", "D_j"};
  for (std::size_t j = 0; j < res.per_sector.size(); ++j) {
    ojson row;
    row["j"] = j;
    row["D_j"] = res.per_sector[j];
    per.push_back(row);
    csv.rows.push_back({(double)j, res.per_sector[j]});
  }
  rep.results()["max_D"] = res.dimension;
  rep.results()["argmax_sector"] = res.argmax_sector;
  rep.results()["analytic_D"] = analytic.value;
  if (analytic.exact) rep.results()["analytic_exact"] = analytic.exact->str();
  const double abs_error = std::fabs(res.dimension - analytic.value);
  rep.results()["abs_error"] = abs_error;
  rep.results()["conjecture"] = false;
  rep.results()["per_sector"] = per;

  write_csv(out_path(g, "sectors.csv"), csv, g.digits);
  std::cout << "max_D = " << num(res.dimension, g.digits) << " (sector "
            << res.argmax_sector << " of " << o.L << ")\n"
            << "analytic " << (analytic.exact ? analytic.exact->str() : "")
            << " = " << num(analytic.value, g.digits)
            << ", |error| = " << num(abs_error, 3) << "\n";
  finish_report(rep, g, timer, "sector.json");
  return 0;
}

// ---------------------------------------------------------------------------
// oracle

struct OracleOpts {
  std::string family, file;
  int dim = 2;
  int n = 1, m = 0, k = 1;
  double r0 = 0.9, phi0 = 0.0;
  double alpha = 0.5, phi_start = 1.0;
  double d1 = 0.5, d2 = 1.0, phase = 0.0, x_max = 1.0;
  double p0 = 0.5, q0 = 1.0, t_start = 2.0;
  double eps_lo = 1e-4, eps_hi = 1e-2;
  int per_decade = 4;
  bool eps_given = false;
};

CountSeries run_counter(const std::vector<double>& epses, int workers,
                        const std::function<std::uint64_t(double)>& counter) {
  CountSeries s;
  s.eps = epses;
  s.count.assign(epses.size(), 0.0);
  parallel_for(epses.size(), workers, [&](std::size_t i) {
    s.count[i] = (double)counter(epses[i]);
  });
  return s;
}

void emit_counts_csv(const Global& g, const CountSeries& s) {
  CsvTable csv;
  csv.header = {"eps", "count"};
  for (std::size_t i = 0; i < s.eps.size(); ++i)
    csv.rows.push_back({s.eps[i], s.count[i]});
  write_csv(out_path(g, "counts.csv"), csv, g.digits);
}

void report_comparison(const Global& g, RunReport& rep, const DimensionFit& f,
                       const DimensionEstimate& ref) {
  const bool conj = ref.method == "conjecture";
  const std::string label =
      conj ? "conjecture comparison" : "analytic comparison";
  rep.results()["fit"] = fit_json(f);
  rep.results()["comparison"] = label;
  rep.results()["reference"] = est_json(ref);
  const double diff = std::fabs(f.dimension - ref.value);
  rep.results()["abs_difference"] = diff;
  std::cout << "fit dimension = " << num(f.dimension, g.digits) << " +/- "
            << num(f.stderr_est, 3) << "\n"
            << label << ": " << (ref.exact ? ref.exact->str() + " = " : "")
            << num(ref.value, g.digits) << ", |diff| = " << num(diff, 3)
            << "\n";
}

int cmd_oracle(const Global& g, const OracleOpts& o) {
  Timer timer;
  RunReport rep("oracle");
  const std::vector<double> epses =
      eps_ladder(o.eps_lo, o.eps_hi, o.per_decade);
  rep.parameters()["eps_lo"] = o.eps_lo;
  rep.parameters()["eps_hi"] = o.eps_hi;
  rep.parameters()["eps_per_decade"] = o.per_decade;

  if (!o.file.empty()) {
    rep.parameters()["file"] = o.file;
    rep.parameters()["dim"] = o.dim;
    std::vector<double> zs;
    const PointCloud pts = read_points_csv(o.file, &zs);
    CountSeries s;
    if (o.dim == 2) {
      std::vector<double> eps_user = epses;
      if (!o.eps_given) {
        double xlo = pts.xs[0], xhi = pts.xs[0], ylo = pts.ys[0],
               yhi = pts.ys[0];
        for (double v : pts.xs) xlo = std::min(xlo, v), xhi = std::max(xhi, v);
        for (double v : pts.ys) ylo = std::min(ylo, v), yhi = std::max(yhi, v);
        const double ext = std::max(xhi - xlo, yhi - ylo);
        if (!(ext > 0.0)) throw DomainError("point cloud has no extent");
        eps_user =
            eps_ladder(ext / 1024.0, ext / 16.0, std::max(o.per_decade, 6));
        rep.parameters()["eps_lo"] = eps_user.back();
        rep.parameters()["eps_hi"] = eps_user.front();
      }
      CountOptions copt;
      copt.seed = g.seed;
      rep.parameters()["anchors"] = copt.anchors;
      s = count_series(pts, eps_user, copt);
    } else if (o.dim == 3) {
      if (zs.size() != pts.size())
        throw DomainError("--dim 3 needs a third (z) column in the file");
      double lo[3], hi[3];
      lo[0] = hi[0] = pts.xs[0];
      lo[1] = hi[1] = pts.ys[0];
      lo[2] = hi[2] = zs[0];
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double v[3] = {pts.xs[i], pts.ys[i], zs[i]};
        for (int a = 0; a < 3; ++a) {
          lo[a] = std::min(lo[a], v[a]);
          hi[a] = std::max(hi[a], v[a]);
        }
      }
      std::vector<double> eps_user = epses;
      if (!o.eps_given) {
        const double ext = std::max({hi[0] - lo[0], hi[1] - lo[1],
                                     hi[2] - lo[2]});
        if (!(ext > 0.0)) throw DomainError("point cloud has no extent");
        eps_user =
            eps_ladder(ext / 256.0, ext / 8.0, std::max(o.per_decade, 6));
        rep.parameters()["eps_lo"] = eps_user.back();
        rep.parameters()["eps_hi"] = eps_user.front();
      }
      rep.parameters()["anchors"] = 1;
      s.eps = eps_user;
      for (double eps : eps_user) {
        std::unordered_set<std::uint64_t> cells;
        for (std::size_t i = 0; i < pts.size(); ++i) {
          const std::uint64_t ix = (std::uint64_t)((pts.xs[i] - lo[0]) / eps);
          const std::uint64_t iy = (std::uint64_t)((pts.ys[i] - lo[1]) / eps);
          const std::uint64_t iz = (std::uint64_t)((zs[i] - lo[2]) / eps);
          if (ix >= (1u << 21) || iy >= (1u << 21) || iz >= (1u << 21))
            throw DomainError("eps too fine for the 3d cloud counter");
          cells.insert((ix << 42) | (iy << 21) | iz);
        }
        s.count.push_back((double)cells.size());
      }
    } else {
      throw DomainError("--dim must be 2 or 3");
    }
    if (!o.eps_given) {
      // Saturation guard for the automatic window: once most points sit in
      // their own cell the count measures the sample, not the set. Keep the
      // scales where cells stay fat and fit those.
      CountSeries kept;
      for (std::size_t i = 0; i < s.eps.size(); ++i)
        if (s.count[i] <= pts.size() / 4.0) {
          kept.eps.push_back(s.eps[i]);
          kept.count.push_back(s.count[i]);
        }
      if (kept.eps.size() < 4)
        throw DomainError(
            "too few points for the automatic eps window; pass --eps-lo and "
            "--eps-hi (or supply a denser cloud)");
      rep.parameters()["eps_lo"] = kept.eps.back();
      rep.parameters()["eps_hi"] = kept.eps.front();
      s = kept;
    }
    const DimensionFit f = fit_full(s);
    emit_counts_csv(g, s);
    rep.results()["fit"] = fit_json(f);
    std::cout << "fit dimension = " << num(f.dimension, g.digits) << " +/- "
              << num(f.stderr_est, 3) << " on " << pts.size() << " points\n";
    finish_report(rep, g, timer, "oracle.json");
    return 0;
  }

  rep.parameters()["family"] = o.family;
  if (o.family == "nn") {
    FocusParams p(o.n, o.n, o.k, -1);
    rep.parameters()["n"] = o.n;
    rep.parameters()["k"] = o.k;
    rep.parameters()["r0"] = o.r0;
    rep.parameters()["phi0"] = o.phi0;
    const CountSeries s = run_counter(epses, g.workers, [&](double eps) {
      return count_spiral_nn(p, o.r0, o.phi0, eps);
    });
    emit_counts_csv(g, s);
    report_comparison(g, rep, fit_full(s), dim_degenerate_nn(o.n, o.k));
  } else if (o.family == "mn") {
    if (o.m < 1) throw DomainError("family mn needs --m");
    FocusParams p(o.m, o.n, o.k, -1);
    rep.parameters()["m"] = o.m;
    rep.parameters()["n"] = o.n;
    rep.parameters()["k"] = o.k;
    rep.parameters()["r0"] = o.r0;
    const CountSeries s = run_counter(epses, g.workers, [&](double eps) {
      return count_oval_mn(p, o.r0, eps);
    });
    emit_counts_csv(g, s);
    report_comparison(g, rep, fit_full(s), dim_conjecture_mn(o.m, o.n, o.k));
  } else if (o.family == "power") {
    rep.parameters()["alpha"] = o.alpha;
    rep.parameters()["phi_start"] = o.phi_start;
    const CountSeries s = run_counter(epses, g.workers, [&](double eps) {
      return count_power_spiral(o.alpha, o.phi_start, eps);
    });
    emit_counts_csv(g, s);
    report_comparison(g, rep, fit_full(s), dim_power_spiral(o.alpha));
  } else if (o.family == "chirp") {
    rep.parameters()["d1"] = o.d1;
    rep.parameters()["d2"] = o.d2;
    rep.parameters()["phase"] = o.phase;
    rep.parameters()["x_max"] = o.x_max;
    const CountSeries s = run_counter(epses, g.workers, [&](double eps) {
      return count_chirp_graph(o.d1, o.d2, o.phase, o.x_max, false, eps);
    });
    emit_counts_csv(g, s);
    report_comparison(g, rep, fit_full(s), dim_chirp(o.d1, o.d2));
  } else if (o.family == "elliptical") {
    rep.parameters()["p0"] = o.p0;
    rep.parameters()["q0"] = o.q0;
    rep.parameters()["t_start"] = o.t_start;
    const CountSeries s = run_counter(epses, g.workers, [&](double eps) {
      return count_elliptical_xy(o.p0, o.q0, o.t_start, eps);
    });
    emit_counts_csv(g, s);
    report_comparison(g, rep, fit_full(s), dim_elliptical(o.p0, o.q0));
  } else if (o.family == "3d") {
    rep.parameters()["p0"] = o.p0;
    rep.parameters()["q0"] = o.q0;
    rep.parameters()["t_start"] = o.t_start;
    const double z_max = 1.0 / o.t_start;
    const CountSeries sxy = run_counter(epses, g.workers, [&](double eps) {
      return count_elliptical_xy(o.p0, o.q0, o.t_start, eps);
    });
    const CountSeries sxz = run_counter(epses, g.workers, [&](double eps) {
      return count_chirp_graph(o.p0, 1.0, M_PI / 2.0, z_max, true, eps);
    });
    const CountSeries syz = run_counter(epses, g.workers, [&](double eps) {
      return count_chirp_graph(o.q0, 1.0, 0.0, z_max, true, eps);
    });
    CsvTable csv;
    csv.header = {"eps", "count_xy", "count_xz", "count_yz"};
    for (std::size_t i = 0; i < epses.size(); ++i)
      csv.rows.push_back(
          {epses[i], sxy.count[i], sxz.count[i], syz.count[i]});
    write_csv(out_path(g, "counts.csv"), csv, g.digits);
    const struct {
      const char* name;
      const CountSeries* s;
      DimensionEstimate ref;
    } rows[] = {
        {"xy", &sxy, dim_elliptical(o.p0, o.q0)},
        {"xz", &sxz, dim_chirp(o.p0, 1.0)},
        {"yz", &syz, dim_chirp(o.q0, 1.0)},
    };
    for (const auto& row : rows) {
      const DimensionFit f = fit_full(*row.s);
      ojson block;
      block["fit"] = fit_json(f);
      block["reference"] = est_json(row.ref);
      block["abs_difference"] = std::fabs(f.dimension - row.ref.value);
      rep.results()[row.name] = block;
      std::cout << row.name << ": fit " << num(f.dimension, g.digits)
                << " vs analytic "
                << (row.ref.exact ? row.ref.exact->str() : "") << " = "
                << num(row.ref.value, g.digits) << "\n";
    }
  } else {
    throw DomainError("unknown oracle family: " + o.family);
  }
  finish_report(rep, g, timer, "oracle.json");
  return 0;
}

// ---------------------------------------------------------------------------
// slowfast

struct SlowfastOpts {
  std::string model_file;
  int count = 0;     // 0: take the model file's value
  double y0 = 0.0;   // 0: take the model file's value
};

int cmd_slowfast(const Global& g, const SlowfastOpts& o) {
  Timer timer;
  ModelRun run = parse_model(read_text(o.model_file));
  if (o.count > 0) run.count = o.count;
  if (o.y0 > 0.0) run.y0 = o.y0;

  const int k = codimension(run.model);
  const SlowFastDims theorem = dims_slowfast(run.model.n, k);
  const OrbitSequence orbit = generate_orbit(run.model, run.y0, run.count);
  const Chirp chirp = build_chirp(orbit);

  RunReport rep("slowfast");
  rep.parameters()["model_file"] = o.model_file;
  rep.parameters()["n"] = run.model.n;
  ojson coeffs = ojson::array();
  for (const auto& [deg, val] : run.model.f)
    coeffs.push_back(ojson::array({deg, val}));
  rep.parameters()["coefficients"] = coeffs;
  rep.parameters()["x_domain"] = run.model.x_domain;
  rep.parameters()["y0"] = run.y0;
  rep.parameters()["count"] = run.count;

  rep.results()["codimension"] = k;
  rep.results()["orientation"] =
      orbit.orientation == Orientation::unstable ? "unstable" : "stable";
  rep.results()["levels"] = (int)orbit.levels.size();
  rep.results()["y_last"] = orbit.levels.back();
  const double ratio_y0 = asymptotic_ratio(run.model, run.y0);
  rep.results()["asymptotic_ratio_at_y0"] = ratio_y0;
  rep.results()["asymptotic_ratio_at_y_last"] =
      asymptotic_ratio(run.model, orbit.levels.back());
  rep.results()["delta1"] = chirp.delta1;
  rep.results()["delta2"] = chirp.delta2;

  // Tail exponent fits; the head of the orbit still feels the offset in
  // y_l ~ A (l + C)^{-p}, so only the second half is fitted.
  const std::size_t half = orbit.levels.size() / 2;
  ojson exps;
  exps["level_decay_fit"] = -log_slope(orbit.levels, half,
                                       orbit.levels.size());
  exps["level_decay_theorem"] = rational_json(theorem.level_decay);
  std::vector<double> gaps(orbit.levels.size() - 1);
  for (std::size_t l = 0; l + 1 < orbit.levels.size(); ++l)
    gaps[l] = orbit.levels[l] - orbit.levels[l + 1];
  exps["gap_decay_fit"] = -log_slope(gaps, half, gaps.size());
  exps["gap_decay_theorem"] = rational_json(theorem.gap_decay);
  rep.results()["exponents"] = exps;

  if ((int)orbit.levels.size() >= 500) {
    const DimensionFit od = orbit_dimension(orbit);
    const DimensionFit cd = chirp_dimension(chirp);
    ojson dims;
    dims["orbit_fit"] = fit_json(od);
    dims["orbit_theorem"] = rational_json(theorem.orbit_dim);
    dims["orbit_abs_error"] =
        std::fabs(od.dimension - theorem.orbit_dim.value());
    dims["chirp_fit"] = fit_json(cd);
    dims["chirp_theorem"] = rational_json(theorem.chirp_dim);
    dims["chirp_abs_error"] =
        std::fabs(cd.dimension - theorem.chirp_dim.value());
    rep.results()["dimensions"] = dims;
    std::cout << "orbit dim fit " << num(od.dimension, g.digits)
              << " vs theorem " << theorem.orbit_dim.str() << " = "
              << num(theorem.orbit_dim.value(), g.digits) << "\n"
              << "chirp dim fit " << num(cd.dimension, g.digits)
              << " vs theorem " << theorem.chirp_dim.str() << " = "
              << num(theorem.chirp_dim.value(), g.digits) << "\n";
  } else {
    rep.results()["dimensions"] = "skipped (needs >= 500 levels)";
  }

  CsvTable orbit_csv;
  orbit_csv.comments = {"entry-exit orbit levels, n=" +
                        std::to_string(run.model.n) +
                        " codimension=" + std::to_string(k)};
  orbit_csv.header = {"l", "y_l"};
  for (std::size_t l = 0; l < orbit.levels.size(); ++l)
    orbit_csv.rows.push_back({(double)l, orbit.levels[l]});
  write_csv(out_path(g, "orbit.csv"), orbit_csv, 17);

  CsvTable chirp_csv;
  chirp_csv.comments = {"chirp intervals, delta1=" + num(chirp.delta1, 6) +
                        " delta2=" + num(chirp.delta2, 6)};
  chirp_csv.header = {"alpha_y", "omega_y", "level"};
  for (const auto& iv : chirp.intervals)
    chirp_csv.rows.push_back({iv.alpha_y, iv.omega_y, iv.level});
  write_csv(out_path(g, "chirp.csv"), chirp_csv, 17);

  std::cout << "codimension k = " << k << " ("
            << rep.results()["orientation"].get<std::string>()
            << "), levels = " << orbit.levels.size()
            << ", ratio(y0) = " << num(ratio_y0, 6) << "\n";
  finish_report(rep, g, timer, "slowfast.json");
  return 0;
}

// ---------------------------------------------------------------------------
// trajectory

struct TrajectoryOpts {
  std::string family;
  int n = 1, m = 0, k = 1, sign = -1;
  double r0 = 0.1, phi0 = 0.0;
  double p0 = 0.5, q0 = 1.0, t_start = 2.0;
  int turns = 10, per_turn = 256;
};

int cmd_trajectory(const Global& g, const TrajectoryOpts& o) {
  Timer timer;
  RunReport rep("trajectory");
  rep.parameters()["family"] = o.family;
  CsvTable csv;
  const int samples = o.turns * o.per_turn + 1;
  if (samples < 2) throw DomainError("need at least one turn and one sample");

  if (o.family == "nn") {
    FocusParams p(o.n, o.n, o.k, o.sign);
    SpiralNN s(p, o.r0, o.phi0);
    rep.parameters()["n"] = o.n;
    rep.parameters()["k"] = o.k;
    rep.parameters()["sign"] = o.sign;
    rep.parameters()["r0"] = o.r0;
    rep.parameters()["phi0"] = o.phi0;
    rep.parameters()["turns"] = o.turns;
    csv.comments = {"family=nn n=" + std::to_string(o.n) +
                    " k=" + std::to_string(o.k) +
                    " sign=" + std::to_string(o.sign) + " r0=" + num(o.r0, 12) +
                    " phi0=" + num(o.phi0, 12)};
    csv.header = {"phi", "x", "y"};
    const double dir = o.sign < 0 ? 1.0 : -1.0;
    for (int i = 0; i < samples; ++i) {
      const double phi = o.phi0 + dir * 2.0 * M_PI * o.turns * i /
                                      (samples - 1.0);
      const double rho = s.r(phi);
      csv.rows.push_back({phi, rho * std::cos(phi), rho * std::sin(phi)});
    }
  } else if (o.family == "mn") {
    const int m = o.m < 1 ? o.n : o.m;
    FocusParams p(m, o.n, o.k, o.sign);
    SpiralMN s(p, o.r0, o.phi0);
    rep.parameters()["m"] = m;
    rep.parameters()["n"] = o.n;
    rep.parameters()["k"] = o.k;
    rep.parameters()["sign"] = o.sign;
    rep.parameters()["r0"] = o.r0;
    rep.parameters()["phi0"] = o.phi0;
    rep.parameters()["turns"] = o.turns;
    csv.comments = {"family=mn m=" + std::to_string(m) +
                    " n=" + std::to_string(o.n) + " k=" + std::to_string(o.k) +
                    " sign=" + std::to_string(o.sign) + " r0=" + num(o.r0, 12) +
                    " phi0=" + num(o.phi0, 12)};
    csv.header = {"phi", "x", "y"};
    const double T = s.trig().T();
    const double dir = o.sign < 0 ? 1.0 : -1.0;
    for (int i = 0; i < samples; ++i) {
      const double phi = o.phi0 + dir * T * o.turns * i / (samples - 1.0);
      double x, y;
      s.point(phi, x, y);
      csv.rows.push_back({phi, x, y});
    }
  } else if (o.family == "3d") {
    if (!(o.p0 > 0.0 && o.p0 <= o.q0))
      throw DomainError("spatial spiral needs 0 < p0 <= q0");
    if (!(o.t_start > 0.0)) throw DomainError("t-start must be positive");
    rep.parameters()["p0"] = o.p0;
    rep.parameters()["q0"] = o.q0;
    rep.parameters()["t_start"] = o.t_start;
    rep.parameters()["turns"] = o.turns;
    csv.comments = {"family=3d p0=" + num(o.p0, 12) + " q0=" + num(o.q0, 12) +
                    " t_start=" + num(o.t_start, 12)};
    csv.header = {"t", "x", "y", "z"};
    for (int i = 0; i < samples; ++i) {
      const double t =
          o.t_start + 2.0 * M_PI * o.turns * i / (samples - 1.0);
      csv.rows.push_back({t, std::pow(t, -o.p0) * std::cos(t),
                          std::pow(t, -o.q0) * std::sin(t), 1.0 / t});
    }
  } else {
    throw DomainError("unknown trajectory family: " + o.family);
  }

  write_csv(out_path(g, "trajectory.csv"), csv, 17);
  rep.results()["rows"] = (int)csv.rows.size();
  rep.results()["file"] = "trajectory.csv";
  std::cout << "wrote " << csv.rows.size() << " samples to "
            << out_path(g, "trajectory.csv") << "\n";
  finish_report(rep, g, timer, "trajectory.json");
  return 0;
}

// ---------------------------------------------------------------------------
// plot

struct PlotOpts {
  std::string data;
  std::string kind;
  std::string caption;
};

int cmd_plot(const Global& g, const PlotOpts& o) {
  const CsvTable t = read_csv(o.data);
  const std::size_t w = t.rows.front().size();
  std::string caption = o.caption;
  if (caption.empty())
    caption = t.comments.empty() ? (o.kind + " of " + o.data) : t.comments[0];
  std::string svg, name;

  if (o.kind == "spiral") {
    if (w != 2 && w != 3)
      throw DomainError(
          "spiral plot needs (x, y) or (t_or_phi, x, y) columns");
    const std::size_t cx = w == 3 ? 1 : 0, cy = w == 3 ? 2 : 1;
    std::vector<double> xs, ys;
    for (const auto& row : t.rows) {
      xs.push_back(row[cx]);
      ys.push_back(row[cy]);
    }
    svg = svg_polyline(xs, ys, caption);
    name = "spiral.svg";
  } else if (o.kind == "chirp") {
    if (w != 3)
      throw DomainError("chirp plot needs (alpha_y, omega_y, level) columns");
    std::vector<double> x0, x1, y;
    for (const auto& row : t.rows) {
      x0.push_back(row[0]);
      x1.push_back(row[1]);
      y.push_back(row[2]);
    }
    svg = svg_intervals(x0, x1, y, caption);
    name = "chirp.svg";
  } else if (o.kind == "loglog") {
    if (w != 2) throw DomainError("loglog plot needs (eps, count) columns");
    CountSeries s;
    for (const auto& row : t.rows) {
      s.eps.push_back(row[0]);
      s.count.push_back(row[1]);
    }
    const DimensionFit f = fit_full(s);
    if (o.caption.empty())
      caption += ", slope = " + num(f.dimension, 6);
    svg = svg_loglog(s.eps, s.count, f.dimension, f.intercept, caption);
    name = "loglog.svg";
  } else {
    throw DomainError("unknown plot kind: " + o.kind);
  }

  write_text(out_path(g, name), svg);
  std::cout << "wrote " << out_path(g, name) << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  Global g;
  AnalyticOpts ao;
  SectorOpts so;
  OracleOpts oo;
  SlowfastOpts fo;
  TrajectoryOpts to;
  PlotOpts po;
  int rc = 0;

  CLI::App app{"box dimensions of degenerate spiral trajectories"};
  app.set_version_flag("--version", std::string(kVersion));
  app.fallthrough();
  app.set_config("--config", "", "key=value defaults; flags override");
  app.add_option("--out-dir", g.out_dir, "directory for reports and data");
  app.add_option("--precision-digits", g.digits,
                 "significant digits in printed and CSV numbers")
      ->envname("SPIRALDIM_PRECISION")
      ->check(CLI::Range(3, 17));
  app.add_option("--workers", g.workers, "worker threads; 0 = auto");
  app.add_option("--seed", g.seed, "seed for randomized grid anchors");
  app.require_subcommand(1);

  CLI::App* analytic =
      app.add_subcommand("analytic", "catalog dimension of a named family");
  analytic
      ->add_option("family", ao.family,
                   "nn | mn-conjecture | power | chirp | elliptical | "
                   "slowfast")
      ->required();
  analytic->add_option("--n", ao.n, "degree parameter n");
  analytic->add_option("--m", ao.m, "degree parameter m");
  analytic->add_option("--k", ao.k, "exponent k");
  analytic->add_option("--alpha", ao.alpha, "power spiral exponent (p/q ok)");
  analytic->add_option("--d1", ao.d1, "chirp amplitude exponent (p/q ok)");
  analytic->add_option("--d2", ao.d2, "chirp frequency exponent (p/q ok)");
  analytic->add_option("--p0", ao.p0, "spatial x-decay exponent (p/q ok)");
  analytic->add_option("--q0", ao.q0, "spatial y-decay exponent (p/q ok)");
  analytic->callback([&] { rc = cmd_analytic(g, ao); });

  CLI::App* sector = app.add_subcommand(
      "estimate-sector", "sector tail/nucleus estimate of the focus dimension");
  sector->add_option("--n", so.n, "focus degree (odd)")->required();
  sector->add_option("--k", so.k, "focus exponent")->required();
  sector->add_option("--r0", so.r0, "starting radius");
  sector->add_option("--phi0", so.phi0, "starting angle");
  sector->add_option("--L", so.L, "angular sectors per turn");
  sector->add_option("--eps-log10", so.eps_log10,
                     "log10 of the neighborhood width");
  sector->add_option("--digits", so.digits,
                     "log-domain working precision (up to 100)");
  sector->callback([&] { rc = cmd_estimate_sector(g, so); });

  CLI::App* oracle = app.add_subcommand(
      "oracle", "grid box-count of a built-in curve or a CSV point cloud");
  oracle->add_option("--family", oo.family,
                     "nn | mn | power | chirp | elliptical | 3d");
  oracle->add_option("--file", oo.file, "CSV point cloud (x[,y[,z]])")
      ->check(CLI::ExistingFile);
  oracle->add_option("--dim", oo.dim, "ambient dimension for --file");
  oracle->add_option("--n", oo.n, "degree parameter n");
  oracle->add_option("--m", oo.m, "degree parameter m");
  oracle->add_option("--k", oo.k, "exponent k");
  oracle->add_option("--r0", oo.r0, "starting radius");
  oracle->add_option("--phi0", oo.phi0, "starting angle");
  oracle->add_option("--alpha", oo.alpha, "power spiral exponent");
  oracle->add_option("--phi-start", oo.phi_start, "power spiral start angle");
  oracle->add_option("--d1", oo.d1, "chirp amplitude exponent");
  oracle->add_option("--d2", oo.d2, "chirp frequency exponent");
  oracle->add_option("--phase", oo.phase, "chirp phase");
  oracle->add_option("--x-max", oo.x_max, "chirp domain right endpoint");
  oracle->add_option("--p0", oo.p0, "spatial x-decay exponent");
  oracle->add_option("--q0", oo.q0, "spatial y-decay exponent");
  oracle->add_option("--t-start", oo.t_start, "spatial spiral start time");
  CLI::Option* elo = oracle->add_option("--eps-lo", oo.eps_lo,
                                        "finest grid width");
  CLI::Option* ehi = oracle->add_option("--eps-hi", oo.eps_hi,
                                        "coarsest grid width");
  oracle->add_option("--eps-per-decade", oo.per_decade,
                     "grid widths per decade");
  oracle->callback([&] {
    oo.eps_given = elo->count() > 0 || ehi->count() > 0;
    if (oo.family.empty() == oo.file.empty())
      throw DomainError("oracle needs exactly one of --family or --file");
    rc = cmd_oracle(g, oo);
  });

  CLI::App* slowfast = app.add_subcommand(
      "slowfast", "entry-exit orbit and chirp analysis of a layer model");
  slowfast->add_option("model-file", fo.model_file, "JSON or key=value model")
      ->required()
      ->check(CLI::ExistingFile);
  slowfast->add_option("--count", fo.count, "levels to generate (overrides)");
  slowfast->add_option("--y0", fo.y0, "starting level (overrides)");
  slowfast->callback([&] { rc = cmd_slowfast(g, fo); });

  CLI::App* trajectory = app.add_subcommand(
      "trajectory", "closed-form trajectory samples as CSV");
  trajectory
      ->add_option("--family", to.family, "nn | mn | 3d")
      ->required();
  trajectory->add_option("--n", to.n, "degree parameter n");
  trajectory->add_option("--m", to.m, "degree parameter m (mn family)");
  trajectory->add_option("--k", to.k, "exponent k");
  trajectory->add_option("--sign", to.sign, "-1 stable, +1 unstable");
  trajectory->add_option("--r0", to.r0, "starting radius");
  trajectory->add_option("--phi0", to.phi0, "starting angle");
  trajectory->add_option("--p0", to.p0, "spatial x-decay exponent");
  trajectory->add_option("--q0", to.q0, "spatial y-decay exponent");
  trajectory->add_option("--t-start", to.t_start, "spatial start time");
  trajectory->add_option("--turns", to.turns, "windings to sample");
  trajectory->add_option("--samples-per-turn", to.per_turn,
                         "samples per winding");
  trajectory->callback([&] { rc = cmd_trajectory(g, to); });

  CLI::App* plot =
      app.add_subcommand("plot", "standalone SVG from a data CSV");
  plot->add_option("data", po.data, "input CSV")
      ->required()
      ->check(CLI::ExistingFile);
  plot->add_option("--kind", po.kind, "spiral | chirp | loglog")->required();
  plot->add_option("--caption", po.caption, "plot caption override");
  plot->callback([&] { rc = cmd_plot(g, po); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

}  // namespace spiraldim
