#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "gjmslab/errors.hpp"

using namespace gjmslab;
using namespace gjmslab::cli;

int main(int argc, char** argv) {
  CLI::App app{"gjmslab: verification suites for GJMS operators and sharp inequalities on spheres"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key = value file, flags override");

  RunConfig cfg;
  std::string range;
  app.add_option("--n", cfg.n, "sphere dimensions, comma separated")->delimiter(',');
  app.add_option("--gamma", cfg.gamma, "explicit gamma values, comma separated")->delimiter(',');
  app.add_option("--gamma-range", range, "gamma sweep lo:hi:count; unsupported points are skipped");
  app.add_option("--lambda", cfg.lambda, "reverse-hls exponents, comma separated")->delimiter(',');
  app.add_option("--grid", cfg.grid, "quadrature nodes (0: automatic)");
  app.add_option("--modes", cfg.modes, "spectral truncation L (0: command default)");
  app.add_option("--jet-order", cfg.jet_order, "rho-jet order (0: 2 floor(gamma) + 6)");
  app.add_option("--tol", cfg.tol, "equality tolerance (0: command default)");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--samples", cfg.samples, "random inputs per cell (0: command default)");
  app.add_option("--budget", cfg.budget, "counterexample search evaluations (0: default)");
  app.add_option("--out", cfg.out, "output directory for reports, plots and tables");
  app.add_option("--format", cfg.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--parallel", cfg.parallel, "worker threads for suite cells");

  for (const auto& name : command_names()) app.add_subcommand(name, command_summary(name))->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (!range.empty()) cfg.gamma_range = parse_gamma_range(range);
    Report r = run_command(name, cfg);
    if (!cfg.out.empty()) write_outputs(r, cfg);
    if (cfg.format == "json") std::cout << to_json(r) << "\n";
    else write_records_csv(std::cout, r);

    auto table = r.files.find("boundary_coefficients.txt");
    if (table != r.files.end()) std::cerr << table->second;
    int shown = 0;
    for (const auto& rec : r.records) {
      if (rec.verdict != Verdict::fail || shown++ >= 10) continue;
      std::cerr << "FAIL " << rec.name << (rec.note.empty() ? "" : ": " + rec.note) << "\n";
    }
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    std::cerr << name << ": " << verdict_name(r.verdict()) << " (" << r.records.size() << " records, "
              << r.failures() << " failed) in " << r.seconds << " s\n";
    return exit_code(r);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
