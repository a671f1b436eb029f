#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "spiraldim/boxcount.hpp"

namespace spiraldim {

// Reproducible run artifact. Field order is fixed at construction, so the
// serialization is byte-stable for identical inputs and seeds; timing sits
// last and is the one field allowed to differ between such runs.
class RunReport {
 public:
  explicit RunReport(const std::string& command);
  nlohmann::ordered_json& precision() { return doc_["precision"]; }
  nlohmann::ordered_json& parameters() { return doc_["parameters"]; }
  nlohmann::ordered_json& results() { return doc_["results"]; }
  void set_timing_seconds(double s);
  std::string serialize() const;
  void write(const std::string& path) const;

 private:
  nlohmann::ordered_json doc_;
};

// CSV with one header row; '#' lines are comments and may carry model
// parameters. Data cells are numeric.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

void write_csv(const std::string& path, const CsvTable& t, int digits = 12);

// Reads a CSV written by this tool or by the user: optional '#' comments,
// optional header row (detected by non-numeric cells), numeric data rows of
// consistent width. Throws ParseError on malformed input.
CsvTable read_csv(const std::string& path);

// Point-cloud ingestion: 1, 2, or 3 numeric columns per row (x[,y[,z]]).
// Missing y is read as 0; a z column, when present, fills *zs.
PointCloud read_points_csv(const std::string& path,
                           std::vector<double>* zs = nullptr);

// Standalone SVG 1.1 documents; deterministic text output.
std::string svg_polyline(const std::vector<double>& xs,
                         const std::vector<double>& ys,
                         const std::string& caption);
std::string svg_intervals(const std::vector<double>& x0,
                          const std::vector<double>& x1,
                          const std::vector<double>& y,
                          const std::string& caption);
// Scatter of (ln(1/eps), ln count) with the fitted line drawn through the
// data range; slope and intercept use the same natural-log convention as
// the dimension fits.
std::string svg_loglog(const std::vector<double>& eps,
                       const std::vector<double>& count, double slope,
                       double intercept, const std::string& caption);

void write_text(const std::string& path, const std::string& body);
std::string read_text(const std::string& path);

}  // namespace spiraldim
