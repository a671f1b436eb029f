#include "spiraldim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spiraldim/errors.hpp"
#include "spiraldim/version.hpp"

namespace spiraldim {

RunReport::RunReport(const std::string& command) {
  doc_["command"] = command;
  doc_["version"] = kVersion;
  doc_["precision"] = nlohmann::ordered_json::object();
  doc_["parameters"] = nlohmann::ordered_json::object();
  doc_["results"] = nlohmann::ordered_json::object();
  doc_["timing_seconds"] = 0.0;
}

void RunReport::set_timing_seconds(double s) { doc_["timing_seconds"] = s; }

std::string RunReport::serialize() const { return doc_.dump(2) + "\n"; }

void RunReport::write(const std::string& path) const {
  write_text(path, serialize());
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << body;
  if (!out) throw IoError("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::string fmt_cell(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_cell(const std::string& cell, double* out) {
  const std::string t = trim(cell);
  if (t.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) return false;
  *out = v;
  return true;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace

void write_csv(const std::string& path, const CsvTable& t, int digits) {
  std::ostringstream out;
  for (const auto& c : t.comments) out << "# " << c << "\n";
  for (std::size_t i = 0; i < t.header.size(); ++i)
    out << (i ? "," : "") << t.header[i];
  if (!t.header.empty()) out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << fmt_cell(row[i], digits);
    out << "\n";
  }
  write_text(path, out.str());
}

CsvTable read_csv(const std::string& path) {
  const std::string body = read_text(path);
  CsvTable t;
  std::istringstream in(body);
  std::string line;
  std::size_t lineno = 0;
  bool saw_rows = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty()) continue;
    if (s[0] == '#') {
      t.comments.push_back(trim(s.substr(1)));
      continue;
    }
    const auto cells = split_commas(s);
    std::vector<double> row(cells.size());
    bool numeric = true;
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (!parse_cell(cells[i], &row[i])) {
        numeric = false;
        break;
      }
    if (!numeric) {
      if (saw_rows || !t.header.empty())
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": non-numeric data cell");
      for (const auto& c : cells) t.header.push_back(trim(c));
      continue;
    }
    if (!t.rows.empty() && row.size() != t.rows.front().size())
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": inconsistent column count");
    if (!t.header.empty() && row.size() != t.header.size())
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": row width does not match header");
    t.rows.push_back(std::move(row));
    saw_rows = true;
  }
  if (t.rows.empty()) throw ParseError(path + ": no data rows");
  return t;
}

PointCloud read_points_csv(const std::string& path, std::vector<double>* zs) {
  const CsvTable t = read_csv(path);
  const std::size_t w = t.rows.front().size();
  if (w < 1 || w > 3)
    throw ParseError(path + ": expected 1 to 3 columns (x[,y[,z]]), got " +
                     std::to_string(w));
  PointCloud pts;
  if (zs) zs->clear();
  for (const auto& row : t.rows) {
    pts.add(row[0], w >= 2 ? row[1] : 0.0);
    if (zs && w == 3) zs->push_back(row[2]);
  }
  return pts;
}

namespace {

constexpr double kW = 640.0, kH = 480.0, kMargin = 48.0;

struct Box {
  double xlo, xhi, ylo, yhi;
};

Box bbox(const std::vector<double>& xs, const std::vector<double>& ys) {
  Box b{xs[0], xs[0], ys[0], ys[0]};
  for (double v : xs) {
    b.xlo = std::min(b.xlo, v);
    b.xhi = std::max(b.xhi, v);
  }
  for (double v : ys) {
    b.ylo = std::min(b.ylo, v);
    b.yhi = std::max(b.yhi, v);
  }
  if (b.xhi == b.xlo) b.xhi = b.xlo + 1.0;
  if (b.yhi == b.ylo) b.yhi = b.ylo + 1.0;
  return b;
}

double map_x(const Box& b, double x) {
  return kMargin + (x - b.xlo) / (b.xhi - b.xlo) * (kW - 2 * kMargin);
}

// SVG y grows downward; flip so the plot reads mathematically.
double map_y(const Box& b, double y) {
  return kH - kMargin - (y - b.ylo) / (b.yhi - b.ylo) * (kH - 2 * kMargin);
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else
      out.push_back(c);
  }
  return out;
}

void svg_open(std::ostringstream& out) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      << "width=\"" << fmt(kW) << "\" height=\"" << fmt(kH)
      << "\" viewBox=\"0 0 " << fmt(kW) << " " << fmt(kH) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void svg_frame(std::ostringstream& out, const Box& b,
               const std::string& caption) {
  out << "<rect x=\"" << fmt(kMargin) << "\" y=\"" << fmt(kMargin)
      << "\" width=\"" << fmt(kW - 2 * kMargin) << "\" height=\""
      << fmt(kH - 2 * kMargin)
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<text x=\"" << fmt(kW / 2) << "\" y=\"" << fmt(kMargin - 16)
      << "\" text-anchor=\"middle\" font-family=\"monospace\" "
         "font-size=\"14\">"
      << xml_escape(caption) << "</text>\n";
  out << "<text x=\"" << fmt(kMargin) << "\" y=\"" << fmt(kH - kMargin + 20)
      << "\" font-family=\"monospace\" font-size=\"11\">" << fmt(b.xlo)
      << "</text>\n";
  out << "<text x=\"" << fmt(kW - kMargin) << "\" y=\""
      << fmt(kH - kMargin + 20)
      << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">"
      << fmt(b.xhi) << "</text>\n";
  out << "<text x=\"" << fmt(kMargin - 6) << "\" y=\"" << fmt(kH - kMargin)
      << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">"
      << fmt(b.ylo) << "</text>\n";
  out << "<text x=\"" << fmt(kMargin - 6) << "\" y=\"" << fmt(kMargin + 4)
      << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">"
      << fmt(b.yhi) << "</text>\n";
}

}  // namespace

std::string svg_polyline(const std::vector<double>& xs,
                         const std::vector<double>& ys,
                         const std::string& caption) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw DomainError("polyline needs at least two (x, y) pairs");
  const Box b = bbox(xs, ys);
  std::ostringstream out;
  svg_open(out);
  svg_frame(out, b, caption);
  out << "<polyline fill=\"none\" stroke=\"#1f4e8c\" stroke-width=\"0.8\" "
         "points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i)
    out << (i ? " " : "") << fmt(map_x(b, xs[i])) << ","
        << fmt(map_y(b, ys[i]));
  out << "\"/>\n</svg>\n";
  return out.str();
}

std::string svg_intervals(const std::vector<double>& x0,
                          const std::vector<double>& x1,
                          const std::vector<double>& y,
                          const std::string& caption) {
  if (x0.size() != x1.size() || x0.size() != y.size() || x0.empty())
    throw DomainError("interval plot needs matching (x0, x1, y) triples");
  std::vector<double> allx = x0;
  allx.insert(allx.end(), x1.begin(), x1.end());
  std::vector<double> ally = y;
  ally.insert(ally.end(), y.begin(), y.end());
  const Box b = bbox(allx, ally);
  std::ostringstream out;
  svg_open(out);
  svg_frame(out, b, caption);
  for (std::size_t i = 0; i < x0.size(); ++i) {
    const double py = map_y(b, y[i]);
    out << "<line x1=\"" << fmt(map_x(b, x0[i])) << "\" y1=\"" << fmt(py)
        << "\" x2=\"" << fmt(map_x(b, x1[i])) << "\" y2=\"" << fmt(py)
        << "\" stroke=\"#8c1f2f\" stroke-width=\"1\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string svg_loglog(const std::vector<double>& eps,
                       const std::vector<double>& count, double slope,
                       double intercept, const std::string& caption) {
  if (eps.size() != count.size() || eps.size() < 2)
    throw DomainError("log-log plot needs at least two (eps, count) pairs");
  std::vector<double> xs(eps.size()), ys(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || !(count[i] > 0.0))
      throw DomainError("log-log plot needs positive eps and count");
    xs[i] = std::log(1.0 / eps[i]);
    ys[i] = std::log(count[i]);
  }
  const Box b = bbox(xs, ys);
  std::ostringstream out;
  svg_open(out);
  svg_frame(out, b, caption);
  out << "<line x1=\"" << fmt(map_x(b, b.xlo)) << "\" y1=\""
      << fmt(map_y(b, slope * b.xlo + intercept)) << "\" x2=\""
      << fmt(map_x(b, b.xhi)) << "\" y2=\""
      << fmt(map_y(b, slope * b.xhi + intercept))
      << "\" stroke=\"#1f4e8c\" stroke-width=\"1\"/>\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    out << "<circle cx=\"" << fmt(map_x(b, xs[i])) << "\" cy=\""
        << fmt(map_y(b, ys[i]))
        << "\" r=\"3\" fill=\"#8c1f2f\"/>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace spiraldim
