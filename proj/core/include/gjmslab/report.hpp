#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gjmslab/boundary.hpp"
#include "gjmslab/inequalities.hpp"

namespace gjmslab {

enum class Verdict { pass, warn, fail, skip };
std::string verdict_name(Verdict v);

struct Record {
  std::string name;
  std::string group;
  double lhs = 0.0;
  double rhs = 0.0;
  double deficit = 0.0;
  double relative = 0.0;
  bool has_refinement = false;
  double refinement[2] = {0.0, 0.0};
  double tolerance = 0.0;
  Verdict verdict = Verdict::pass;
  std::string note;
};

// Record carrying the numbers of a deficit report; the verdict is left to the caller.
Record record_from(const DeficitReport& r, std::string name, std::string group);
// |value| <= tol
Record residual_record(std::string name, std::string group, double value, double tol);
// lhs - rhs >= -tol
Record lower_bound_record(std::string name, std::string group, double lhs, double rhs, double tol);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Plot {
  std::string file;  // stem, written as <file>.csv and <file>.svg
  std::string title;
  std::string xlabel;
  std::string ylabel;
  std::vector<PlotSeries> series;
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<Record> records;
  std::map<std::string, std::string> constants;
  std::vector<std::string> warnings;
  std::vector<Plot> plots;
  std::map<std::string, std::string> files;  // extra outputs by file name
  std::string tables;                         // optional JSON fragment
  double seconds = 0.0;

  // fail if any record fails, warn if any warns, pass otherwise
  Verdict verdict() const;
  int failures() const;
  void add(Record r) { records.push_back(std::move(r)); }
  void constant(const std::string& key, double value);
};

// Shortest round-trip decimal form.
std::string decimal(double x);
// FNV-1a over the sorted config entries, as 16 hex digits.
std::string config_digest(const std::vector<std::pair<std::string, std::string>>& config);

std::string to_json(const Report& r, int indent = 2);
void write_records_csv(std::ostream& os, const Report& r);
void write_plot_csv(std::ostream& os, const Plot& p);
void write_plot_svg(std::ostream& os, const Plot& p);

std::string coefficients_json(const BoundaryCoefficients& bc);

}  // namespace gjmslab
