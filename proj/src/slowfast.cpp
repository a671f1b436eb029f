#include "spiraldim/slowfast.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "spiraldim/errors.hpp"
#include "spiraldim/quadrature.hpp"
#include "spiraldim/roots.hpp"
#include "spiraldim/spirals.hpp"

namespace spiraldim {

namespace {

// Flattened coefficient list; map lookups are too slow inside quadrature
// integrands. The even part is kept separately because F(x) + F(-x) would
// cancel catastrophically near the origin if formed by subtraction.
struct Terms {
  int n;
  std::vector<std::pair<int, double>> all;
  std::vector<std::pair<int, double>> even;

  explicit Terms(const LienardModel& m) : n(m.n) {
    for (const auto& [deg, val] : m.f) {
      if (val == 0.0) continue;
      all.emplace_back(deg, val);
      if (deg % 2 == 0) even.emplace_back(deg, val);
    }
  }

  double F(double x) const {
    double s = -ipow(x, 2 * n - 1);
    for (const auto& [deg, val] : all) s += val * ipow(x, deg);
    return s;
  }

  double even_part(double x) const {
    double s = 0.0;
    for (const auto& [deg, val] : even) s += val * ipow(x, deg);
    return s;
  }
};

QuadOptions tight_quad() {
  QuadOptions opt;
  // The recursion solves J to the root tolerance, so the quadrature has to
  // sit well below the 1e-12 residual contract.
  opt.rel_tol = 1e-13;
  opt.max_evals = 2000000;
  return opt;
}

void check_level(const LienardModel& m, double y) {
  if (m.n < 1) throw DomainError("n must be a positive integer");
  if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("level must be positive");
  if (!(y <= std::pow(m.x_domain, 2.0 * m.n)))
    throw DomainError("level escapes the model's validity interval");
}

// J via the substitution u = x^{2n}, which absorbs the contact-point
// degeneracy: the integrand tends to the finite limit -2n at u -> 0.
double one_side(const Terms& t, double y, Side side) {
  const int n = t.n;
  const double ex = (2.0 * n - 1.0) / (2.0 * n);
  const double s = side == Side::attracting ? 1.0 : -1.0;
  const auto integrand = [&](double u) {
    const double x = std::pow(u, 1.0 / (2.0 * n));
    const double Fx = t.F(s * x);
    if (side == Side::attracting ? !(Fx < 0.0) : !(Fx > 0.0))
      throw FZero("F vanishes inside the slow divergence interval");
    return 2.0 * n * std::pow(u, ex) / Fx;
  };
  const double val = quad(integrand, 0.0, y, tight_quad()).value;
  return side == Side::attracting ? val : -val;
}

// (J_- - J_+)(y) in one quadrature. The odd parts of F, the leading
// -x^{2n-1} included, drop out of F(x) + F(-x) analytically, so the
// integrand is built from the even part alone and keeps full precision even
// when the difference is ten orders below either integral.
double difference(const Terms& t, double y) {
  const int n = t.n;
  const double ex = (2.0 * n - 1.0) / (2.0 * n);
  const auto integrand = [&](double u) {
    const double x = std::pow(u, 1.0 / (2.0 * n));
    const double Fp = t.F(x);
    const double Fm = t.F(-x);
    if (!(Fp < 0.0) || !(Fm > 0.0))
      throw FZero("F vanishes inside the slow divergence interval");
    return 2.0 * n * std::pow(u, ex) * 2.0 * t.even_part(x) / (Fp * Fm);
  };
  return quad(integrand, 0.0, y, tight_quad()).value;
}

double smallest_gap(const std::vector<double>& levels) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < levels.size(); ++i)
    g = std::min(g, levels[i - 1] - levels[i]);
  return g;
}

double largest_gap(const std::vector<double>& levels) {
  double g = 0.0;
  for (std::size_t i = 1; i < levels.size(); ++i)
    g = std::max(g, levels[i - 1] - levels[i]);
  return g;
}

// The scaling regime sits between two contaminated zones: coarse scales
// still see the non-asymptotic head of the sequence, and scales below the
// smallest consecutive gap resolve the finite truncation exactly, so counts
// saturate. The window is anchored just above the gap floor; its width in
// multiples of the floor is the policy knob.
std::vector<double> gap_window(const std::vector<double>& levels, double lo_mult,
                               double hi_mult) {
  const double floor_gap = smallest_gap(levels);
  const double lo = lo_mult * floor_gap;
  const double hi = std::min(hi_mult * floor_gap, largest_gap(levels));
  if (!(lo < hi))
    throw DomainError("level gaps leave no scaling window for a dimension fit");
  std::vector<double> epses;
  const int ne = 48;
  for (int i = 0; i < ne; ++i)
    epses.push_back(hi * std::pow(lo / hi, i / (ne - 1.0)));
  return epses;
}

DimensionFit fit_whole(const CountSeries& s) {
  return fit_dimension(s, s.eps.back() * 0.99, s.eps.front() * 1.01);
}

}  // namespace

double LienardModel::F(double x) const {
  double s = -ipow(x, 2 * n - 1);
  for (const auto& [deg, val] : f) s += val * ipow(x, deg);
  return s;
}

void LienardModel::validate() const {
  if (n < 1) throw DomainError("n must be a positive integer");
  if (!(x_domain > 0.0) || !std::isfinite(x_domain))
    throw DomainError("x_domain must be positive");
  for (const auto& [deg, val] : f) {
    if (deg < 2 * n)
      throw DomainError("perturbation degrees must be at least 2n");
    if (!std::isfinite(val)) throw DomainError("coefficients must be finite");
  }
  // Sign scan; the integrals re-check pointwise at every quadrature node.
  const int scan = 4096;
  for (int j = 1; j <= scan; ++j) {
    const double x = x_domain * j / scan;
    if (!(F(x) < 0.0) || !(F(-x) > 0.0))
      throw DomainError("F changes sign inside the validity interval");
  }
}

int codimension(const LienardModel& m) {
  if (m.n < 1) throw DomainError("n must be a positive integer");
  for (const auto& [deg, val] : m.f)
    if (deg % 2 == 0 && deg >= 2 * m.n && val != 0.0) return deg / 2;
  throw InfiniteCodimension(
      "every even coefficient vanishes; the entry-exit codimension is not finite");
}

double slow_div_integral(const LienardModel& m, double y, Side side) {
  check_level(m, y);
  return one_side(Terms(m), y, side);
}

double asymptotic_ratio(const LienardModel& m, double y) {
  check_level(m, y);
  const int k = codimension(m);
  const double f2k = m.f.at(2 * k);
  const double n = m.n;
  const double denom =
      -(8.0 * n * n / (2.0 * k + 1.0)) * f2k * std::pow(y, (2.0 * k + 1.0) / (2.0 * n));
  return difference(Terms(m), y) / denom;
}

OrbitSequence generate_orbit(const LienardModel& m, double y0, int count) {
  m.validate();
  codimension(m);  // rejects models with no even part before any quadrature
  check_level(m, y0);
  if (count < 2) throw DomainError("an orbit needs at least two levels");

  const Terms t(m);
  const double jm = one_side(t, y0, Side::attracting);
  const double jd = difference(t, y0);
  // The sign of J_- - J_+ picks the orientation; when it drowns in the
  // quadrature noise floor we refuse to guess.
  if (!(std::fabs(jd) > 1e-9 * std::fabs(jm)))
    throw DomainError("entry-exit sign is numerically ambiguous at this level");

  OrbitSequence orbit;
  orbit.model = m;
  orbit.orientation = jd < 0.0 ? Orientation::unstable : Orientation::stable;
  // Unstable: J_-(y_{l+1}) = J_+(y_l); stable: the mirrored recursion.
  const Side solve_side =
      orbit.orientation == Orientation::unstable ? Side::attracting : Side::repelling;
  const Side target_side =
      orbit.orientation == Orientation::unstable ? Side::repelling : Side::attracting;

  orbit.levels.reserve(count);
  orbit.levels.push_back(y0);
  while (static_cast<int>(orbit.levels.size()) < count) {
    const int l = static_cast<int>(orbit.levels.size());
    const double yl = orbit.levels.back();
    const double target = one_side(t, yl, target_side);
    const auto g = [&](double z) { return one_side(t, z, solve_side) - target; };
    // g(yl) = (J_- - J_+)(yl) with the orientation's sign, so the root lies
    // below yl; expand the bracket downward geometrically until g flips.
    double hi = yl;
    double lo = yl / 8.0;
    double glo = g(lo);
    while (glo < 0.0) {
      hi = lo;
      lo /= 8.0;
      if (lo < 1e-300)
        throw BracketFailure("failed to bracket the next level", l);
      glo = g(lo);
    }
    double z;
    if (glo == 0.0) {
      z = lo;
    } else {
      try {
        z = solve_monotone(g, lo, hi);
      } catch (const BadBracket&) {
        throw BracketFailure("failed to bracket the next level", l);
      }
    }
    if (!(z > 0.0) || !(z < yl))
      throw BracketFailure("level recursion stalled", l);
    orbit.levels.push_back(z);
  }
  return orbit;
}

Chirp build_chirp(const OrbitSequence& orbit) {
  const int k = codimension(orbit.model);
  const int n = orbit.model.n;
  Chirp c;
  c.delta1 = 1.0 / (2.0 * n);
  c.delta2 = (2.0 * (k - n) + 1.0) / (2.0 * n);
  c.intervals.reserve(orbit.levels.size());
  for (const double y : orbit.levels) {
    const double w = std::pow(y, c.delta1);
    c.intervals.push_back({-w, w, y});
  }
  return c;
}

DimensionFit orbit_dimension(const OrbitSequence& orbit) {
  if (orbit.levels.size() < 500)
    throw DomainError("an orbit dimension fit needs at least 500 levels");
  CountSeries s;
  // The merged tail block below the resolution scale loses a visible cell
  // fraction to truncation, so the orbit window anchors a little higher
  // above the gap floor than the chirp's.
  for (const double e : gap_window(orbit.levels, 4.0, 2000.0)) {
    s.eps.push_back(e);
    s.count.push_back(static_cast<double>(cover_1d(orbit.levels, e)));
  }
  return fit_whole(s);
}

DimensionFit chirp_dimension(const Chirp& chirp) {
  if (chirp.intervals.size() < 500)
    throw DomainError("a chirp dimension fit needs at least 500 intervals");
  std::vector<double> levels;
  levels.reserve(chirp.intervals.size());
  for (const auto& iv : chirp.intervals) levels.push_back(iv.level);

  CountSeries s;
  // Row cells dominate the chirp counts, which mutes the truncation deficit;
  // the binding contamination is the head transient at coarse scales, so the
  // window hugs the gap floor.
  for (const double e : gap_window(levels, 2.0, 200.0)) {
    // Exact cell count of the union: levels are strictly decreasing and the
    // intervals nested, so the first interval landing in a grid row is the
    // widest one there and covers the others.
    long long total = 0;
    long long last_row = std::numeric_limits<long long>::min();
    for (const auto& iv : chirp.intervals) {
      const long long row = static_cast<long long>(std::floor(iv.level / e));
      if (row == last_row) continue;
      last_row = row;
      const long long xlo = static_cast<long long>(std::floor(iv.alpha_y / e));
      const long long xhi = static_cast<long long>(std::floor(iv.omega_y / e));
      total += xhi - xlo + 1;
    }
    s.eps.push_back(e);
    s.count.push_back(static_cast<double>(total));
  }
  return fit_whole(s);
}

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_number(const std::string& v, const std::string& key) {
  const std::string s = trimmed(v);
  if (s.empty()) throw ParseError("empty value for " + key);
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    throw ParseError("malformed number for " + key + ": " + s);
  return x;
}

int parse_int(const std::string& v, const std::string& key) {
  const double x = parse_number(v, key);
  if (x != std::floor(x) || std::fabs(x) > 1e9)
    throw ParseError(key + " must be an integer");
  return static_cast<int>(x);
}

ModelRun parse_json_model(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON model file: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("model file must hold a JSON object");
  ModelRun run;
  try {
    run.model.n = j.at("n").get<int>();
    for (const auto& pair : j.at("coefficients")) {
      if (!pair.is_array() || pair.size() != 2)
        throw ParseError("coefficients must be [degree, value] pairs");
      run.model.f[pair.at(0).get<int>()] = pair.at(1).get<double>();
    }
    if (j.contains("x_domain")) run.model.x_domain = j.at("x_domain").get<double>();
    if (j.contains("y0")) run.y0 = j.at("y0").get<double>();
    if (j.contains("count")) run.count = j.at("count").get<int>();
  } catch (const ParseError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad model field: ") + e.what());
  }
  return run;
}

ModelRun parse_kv_model(const std::string& text) {
  ModelRun run;
  bool saw_n = false;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trimmed(raw);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trimmed(line.substr(0, eq));
    const std::string val = line.substr(eq + 1);
    if (key == "n") {
      run.model.n = parse_int(val, key);
      saw_n = true;
    } else if (key == "x_domain") {
      run.model.x_domain = parse_number(val, key);
    } else if (key == "y0") {
      run.y0 = parse_number(val, key);
    } else if (key == "count") {
      run.count = parse_int(val, key);
    } else if (key.size() > 1 && key[0] == 'f' &&
               std::all_of(key.begin() + 1, key.end(), [](unsigned char c) {
                 return std::isdigit(c) != 0;
               })) {
      run.model.f[parse_int(key.substr(1), key)] = parse_number(val, key);
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unknown key " + key);
    }
  }
  if (!saw_n) throw ParseError("model file must set n");
  return run;
}

}  // namespace

ModelRun parse_model(const std::string& text) {
  const std::string body = trimmed(text);
  if (body.empty()) throw ParseError("empty model file");
  if (body.front() == '{') return parse_json_model(body);
  return parse_kv_model(body);
}

}  // namespace spiraldim
