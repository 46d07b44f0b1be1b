#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace qedcs::app {

enum class Comparison { LessEqual, GreaterEqual, InRange, Info };

// One checked metric.  `elapsed_s` is the only timing field and is excluded
// from reproducibility comparisons.
struct ResultRow {
  std::string experiment;
  std::string parameters;
  std::string metric;
  double value = 0.0;
  Comparison comparison = Comparison::Info;
  double lower = 0.0;  // GreaterEqual, InRange
  double upper = 0.0;  // LessEqual, InRange
  bool pass = true;
  double elapsed_s = 0.0;
};

ResultRow check_le(std::string experiment, std::string parameters, std::string metric, double value, double upper);
ResultRow check_ge(std::string experiment, std::string parameters, std::string metric, double value, double lower);
ResultRow check_range(std::string experiment, std::string parameters, std::string metric, double value, double lower,
                      double upper);
ResultRow info(std::string experiment, std::string parameters, std::string metric, double value);

// Plot-ready long-format data point.
struct SeriesPoint {
  std::string experiment;
  std::string series;
  double x = 0.0;
  double y = 0.0;
};

struct ResultTable {
  std::string command;
  std::string config_hash;
  std::vector<ResultRow> rows;
  std::vector<SeriesPoint> series;
  nlohmann::json report = nlohmann::json::object();

  bool all_pass() const;
  void append(const ResultTable& other);
};

// RFC 4180 CSV with the columns
//   config_hash,experiment,parameters,metric,value,comparison,lower,upper,pass,elapsed_s
std::string results_csv(const ResultTable& t);
// config_hash,experiment,series,x,y
std::string series_csv(const ResultTable& t);
std::string format_double(double v);
std::string csv_field(const std::string& s);

// Writes <dir>/<command>.csv, <dir>/<command>_series.csv and <dir>/<command>.json.
void write_outputs(const ResultTable& t, const std::string& dir);

}  // namespace qedcs::app
