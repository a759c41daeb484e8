#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "gjmslab/errors.hpp"

using namespace gjmslab;
using namespace gjmslab::cli;
using nlohmann::json;

namespace {
RunConfig small() {
  RunConfig c;
  c.samples = 5;
  return c;
}
}  // namespace

TEST_CASE("report schema") {
  RunConfig cfg = small();
  cfg.n = {2};
  cfg.gamma = {0.7};
  Report r = run_command("sobolev", cfg);
  json j = json::parse(to_json(r));
  CHECK(j["command"] == "sobolev");
  CHECK(j["config"]["n"] == "2");
  CHECK(j["config"]["digest"].get<std::string>().size() == 16);
  CHECK(j["verdict"] == "pass");
  CHECK(j["seconds"].is_number());
  REQUIRE(j["records"].size() == 6);
  for (const auto& rec : j["records"]) {
    for (const char* k : {"name", "lhs", "rhs", "deficit", "relative", "refinement", "verdict"}) CHECK(rec.contains(k));
    CHECK(rec["refinement"].size() == 2);
  }
  CHECK(j["constants"].contains("S[n=2 gamma=0.7]"));
  CHECK(exit_code(r) == 0);
}

TEST_CASE("records csv and plots") {
  RunConfig cfg = small();
  cfg.n = {1};
  Report r = run_command("beckner", cfg);
  std::ostringstream os;
  write_records_csv(os, r);
  std::istringstream is(os.str());
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == static_cast<int>(r.records.size()) + 1);
  REQUIRE(r.plots.size() == 1);
  std::ostringstream svg;
  write_plot_svg(svg, r.plots[0]);
  CHECK(svg.str().rfind("<svg", 0) == 0);
  CHECK(svg.str().find("polyline") != std::string::npos);
}

TEST_CASE("funk-hecke underresolved grid fails with a refinement hint") {
  RunConfig cfg;
  cfg.n = {3};
  cfg.gamma = {1.3};
  cfg.grid = 8;
  Report r = run_command("funk-hecke", cfg);
  CHECK(r.verdict() == Verdict::fail);
  CHECK(exit_code(r) == 2);
  bool hinted = false;
  for (const auto& rec : r.records)
    if (rec.verdict == Verdict::fail) {
      hinted = hinted || rec.note.find("raise --grid") != std::string::npos;
      CHECK(rec.refinement[1] < rec.refinement[0]);
    }
  CHECK(hinted);
  cfg.grid = 0;
  CHECK(run_command("funk-hecke", cfg).verdict() == Verdict::pass);
}

TEST_CASE("pole cells are skipped, unsupported gamma is a configuration error") {
  RunConfig cfg;
  cfg.n = {2};
  cfg.gamma = {1.0, 0.4};
  Report r = run_command("funk-hecke", cfg);
  int skips = 0;
  for (const auto& rec : r.records) skips += rec.verdict == Verdict::skip;
  CHECK(skips == 1);
  CHECK(r.verdict() == Verdict::pass);

  RunConfig s;
  s.gamma = {2.0};
  CHECK_THROWS_AS(run_command("stability", s), ConfigError);
  RunConfig c;
  c.gamma = {2.5};
  CHECK_THROWS_AS(run_command("counterexample", c), ConfigError);
  RunConfig d;
  d.n = {1};
  d.gamma = {1.8};
  CHECK_THROWS_AS(run_command("duality", d), ConfigError);
  CHECK_THROWS_AS(run_command("nonsense", RunConfig{}), ConfigError);
}

TEST_CASE("gamma sweeps skip excluded points") {
  RunConfig cfg = small();
  cfg.n = {1};
  cfg.gamma_range = parse_gamma_range("1.6:2.4:5");
  Report r = run_command("stability", cfg);
  int skips = 0;
  for (const auto& rec : r.records) skips += rec.verdict == Verdict::skip;
  CHECK(skips == 1);  // gamma = 2
  CHECK(r.verdict() == Verdict::pass);
  CHECK_THROWS_AS(parse_gamma_range("1:2"), ConfigError);
}

TEST_CASE("config validation") {
  RunConfig c;
  c.tol = -1;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = RunConfig{};
  c.format = "xml";
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = RunConfig{};
  c.n = {0};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = RunConfig{};
  c.parallel = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  CHECK_NOTHROW(validate(RunConfig{}));
}

TEST_CASE("deterministic given config and seed, independent of threads") {
  RunConfig a = small();
  a.n = {1, 2};
  Report r1 = run_command("reverse-sobolev", a);
  a.parallel = 3;
  Report r2 = run_command("reverse-sobolev", a);
  r1.seconds = r2.seconds = 0;
  CHECK(to_json(r1) == to_json(r2));
  a.seed = 2;
  Report r3 = run_command("reverse-sobolev", a);
  r3.seconds = 0;
  CHECK(to_json(r1) != to_json(r3));
}

TEST_CASE("scattering zero data and boundary flags") {
  RunConfig cfg;
  cfg.n = {2};
  cfg.gamma = {1.3};
  Report r = run_command("scattering", cfg);
  CHECK(r.verdict() == Verdict::pass);
  bool zero = false, flagged = false;
  for (const auto& rec : r.records) {
    if (rec.group == "zero") zero = rec.lhs == 0.0;
    if (rec.group == "boundary-limit") flagged = rec.note.find("r = 0.99") != std::string::npos;
  }
  CHECK(zero);
  CHECK(flagged);
  CHECK(r.constants.count("c_gamma[gamma=1.3]") == 1);
}

TEST_CASE("boundary tables and empty ranges") {
  RunConfig cfg = small();
  cfg.n = {2};
  cfg.gamma = {2.6};
  Report r = run_command("boundary", cfg);
  CHECK(r.verdict() == Verdict::pass);
  json t = json::parse(r.tables);
  REQUIRE(t["coefficients"].size() == 1);
  CHECK(t["coefficients"][0]["zeta"].size() == 3);
  CHECK(r.files.count("boundary_coefficients.txt") == 1);
  bool empty_warned = false;
  for (const auto& w : r.warnings) empty_warned = empty_warned || w.find("right-hand side is 0") != std::string::npos;
  CHECK(empty_warned);
}

TEST_CASE("counterexample budget") {
  RunConfig cfg;
  cfg.budget = 1;
  Report r = run_command("counterexample", cfg);
  CHECK(r.verdict() == Verdict::warn);
  CHECK(exit_code(r) == 0);
  Report full = run_command("counterexample", RunConfig{});
  CHECK(full.verdict() == Verdict::pass);
  CHECK(full.records[0].deficit < 0);
}

TEST_CASE("outputs on disk") {
  namespace fs = std::filesystem;
  RunConfig cfg = small();
  cfg.n = {1};
  cfg.out = (fs::temp_directory_path() / "gjmslab_cli_test").string();
  fs::remove_all(cfg.out);
  Report r = run_command("stability", cfg);
  write_outputs(r, cfg);
  CHECK(fs::exists(fs::path(cfg.out) / "stability_report.json"));
  CHECK(fs::exists(fs::path(cfg.out) / "stability_sweep.svg"));
  CHECK(fs::exists(fs::path(cfg.out) / "stability_sweep.csv"));
  std::ifstream is(fs::path(cfg.out) / "stability_report.json");
  json j = json::parse(is);
  CHECK(j["command"] == "stability");
  fs::remove_all(cfg.out);
}

TEST_CASE("decimal strings round trip") {
  for (double x : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23}) CHECK(std::stod(decimal(x)) == x);
  CHECK(decimal(NAN) == "nan");
  CHECK(config_digest({{"a", "1"}, {"b", "2"}}) == config_digest({{"b", "2"}, {"a", "1"}}));
  CHECK(config_digest({{"a", "1"}}) != config_digest({{"a", "2"}}));
}
