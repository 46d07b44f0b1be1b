#include "qedcs_app/results.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace qedcs::app {

namespace {

ResultRow make(std::string experiment, std::string parameters, std::string metric, double value) {
  ResultRow r;
  r.experiment = std::move(experiment);
  r.parameters = std::move(parameters);
  r.metric = std::move(metric);
  r.value = value;
  return r;
}

const char* comparison_name(Comparison c) {
  switch (c) {
    case Comparison::LessEqual: return "le";
    case Comparison::GreaterEqual: return "ge";
    case Comparison::InRange: return "range";
    case Comparison::Info: return "info";
  }
  return "info";
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  out << content;
}

}  // namespace

ResultRow check_le(std::string experiment, std::string parameters, std::string metric, double value, double upper) {
  ResultRow r = make(std::move(experiment), std::move(parameters), std::move(metric), value);
  r.comparison = Comparison::LessEqual;
  r.upper = upper;
  r.pass = std::isfinite(value) && value <= upper;
  return r;
}

ResultRow check_ge(std::string experiment, std::string parameters, std::string metric, double value, double lower) {
  ResultRow r = make(std::move(experiment), std::move(parameters), std::move(metric), value);
  r.comparison = Comparison::GreaterEqual;
  r.lower = lower;
  r.pass = std::isfinite(value) && value >= lower;
  return r;
}

ResultRow check_range(std::string experiment, std::string parameters, std::string metric, double value, double lower,
                      double upper) {
  ResultRow r = make(std::move(experiment), std::move(parameters), std::move(metric), value);
  r.comparison = Comparison::InRange;
  r.lower = lower;
  r.upper = upper;
  r.pass = std::isfinite(value) && value >= lower && value <= upper;
  return r;
}

ResultRow info(std::string experiment, std::string parameters, std::string metric, double value) {
  return make(std::move(experiment), std::move(parameters), std::move(metric), value);
}

bool ResultTable::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

void ResultTable::append(const ResultTable& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  series.insert(series.end(), other.series.begin(), other.series.end());
  for (auto it = other.report.begin(); it != other.report.end(); ++it) report[it.key()] = it.value();
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string results_csv(const ResultTable& t) {
  std::string out = "config_hash,experiment,parameters,metric,value,comparison,lower,upper,pass,elapsed_s\r\n";
  for (const auto& r : t.rows) {
    out += csv_field(t.config_hash) + "," + csv_field(r.experiment) + "," + csv_field(r.parameters) + "," +
           csv_field(r.metric) + "," + format_double(r.value) + "," + comparison_name(r.comparison) + "," +
           format_double(r.lower) + "," + format_double(r.upper) + "," + (r.pass ? "true" : "false") + "," +
           format_double(r.elapsed_s) + "\r\n";
  }
  return out;
}

std::string series_csv(const ResultTable& t) {
  std::string out = "config_hash,experiment,series,x,y\r\n";
  for (const auto& p : t.series)
    out += csv_field(t.config_hash) + "," + csv_field(p.experiment) + "," + csv_field(p.series) + "," +
           format_double(p.x) + "," + format_double(p.y) + "\r\n";
  return out;
}

void write_outputs(const ResultTable& t, const std::string& dir) {
  const std::filesystem::path d(dir);
  std::filesystem::create_directories(d);
  write_file(d / (t.command + ".csv"), results_csv(t));
  write_file(d / (t.command + "_series.csv"), series_csv(t));
  nlohmann::json j = t.report;
  j["command"] = t.command;
  j["config_hash"] = t.config_hash;
  j["all_pass"] = t.all_pass();
  write_file(d / (t.command + ".json"), j.dump(2) + "\n");
}

}  // namespace qedcs::app
