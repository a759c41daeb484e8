#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gjmslab/report.hpp"

namespace gjmslab::cli {

struct GammaRange {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};
// "lo:hi:count", endpoints included
GammaRange parse_gamma_range(const std::string& text);

struct RunConfig {
  std::vector<int> n;                     // empty: command default
  std::vector<double> gamma;              // explicit values, validated strictly
  std::optional<GammaRange> gamma_range;  // sweep, unsupported points are skipped
  std::vector<double> lambda;             // reverse-hls exponents
  int grid = 0;                           // quadrature nodes, 0: automatic
  int modes = 0;                          // spectral truncation L, 0: command default
  int jet_order = 0;                      // 0: 2 floor(gamma) + 6
  double tol = 0.0;                       // equality tolerance, 0: command default
  unsigned long long seed = 1;
  int samples = 0;  // random inputs per cell, 0: command default
  int budget = 0;   // counterexample evaluations, 0: command default
  std::string out;
  std::string format = "json";
  int parallel = 1;

  std::vector<std::pair<std::string, std::string>> entries() const;
};

// Throws ConfigError on nonpositive or unknown values.
void validate(const RunConfig& cfg);

const std::vector<std::string>& command_names();
std::string command_summary(const std::string& name);

Report cmd_funk_hecke(const RunConfig& cfg);
Report cmd_sobolev(const RunConfig& cfg);
Report cmd_reverse_sobolev(const RunConfig& cfg);
Report cmd_beckner(const RunConfig& cfg);
Report cmd_reverse_hls(const RunConfig& cfg);
Report cmd_duality(const RunConfig& cfg);
Report cmd_stability(const RunConfig& cfg);
Report cmd_scattering(const RunConfig& cfg);
Report cmd_boundary(const RunConfig& cfg);
Report cmd_counterexample(const RunConfig& cfg);

// Validates, dispatches and times. ConfigError for unknown commands or unsupported gamma.
Report run_command(const std::string& name, const RunConfig& cfg);

// 0 pass or warn, 2 fail
int exit_code(const Report& r);

// Writes <command>_report.{json,csv}, plot csv/svg pairs and extra files into cfg.out.
void write_outputs(const Report& r, const RunConfig& cfg);

}  // namespace gjmslab::cli
