#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "gjmslab/boundary.hpp"
#include "gjmslab/errors.hpp"
#include "gjmslab/inequalities.hpp"
#include "gjmslab/scattering.hpp"

namespace gjmslab::cli {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    if constexpr (std::is_floating_point_v<T>) s += decimal(v[i]);
    else s += std::to_string(v[i]);
  }
  return s;
}

double maxc(const ZonalFunction& f) {
  double m = 0.0;
  for (double c : f.coeffs) m = std::max(m, std::fabs(c));
  return m;
}
double diff(const ZonalFunction& a, const ZonalFunction& b) { return maxc(a - b); }
double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }
bool is_integer(double x) { return std::fabs(x - std::round(x)) < 1e-12; }

ZonalFunction unit(ZonalFunction f) {
  f *= 1.0 / std::sqrt(f.l2_squared());
  return f;
}

double tol_or(const RunConfig& c, double d) { return c.tol > 0 ? c.tol : d; }
int modes_or(const RunConfig& c, int d) { return c.modes > 0 ? c.modes : d; }
int samples_or(const RunConfig& c, int d) { return c.samples > 0 ? c.samples : d; }
std::vector<int> n_or(const RunConfig& c, std::vector<int> d) { return c.n.empty() ? d : c.n; }

std::vector<double> linspace(double a, double b, int k) {
  std::vector<double> v(k);
  for (int i = 0; i < k; ++i) v[i] = k == 1 ? a : a + (b - a) * i / (k - 1);
  return v;
}

struct Cell {
  int n = 0;
  double value = 0.0;  // gamma or lambda
  std::string label;
};

std::string cell_label(int n, double g, const char* key = "gamma") {
  return "n=" + std::to_string(n) + " " + key + "=" + fmt(g);
}

struct CellOut {
  std::vector<Record> records;
  std::vector<std::string> warnings;
  std::vector<PlotSeries> series;
  std::vector<std::pair<std::string, double>> constants;
  std::map<std::string, std::string> files;
  std::string rows;
};

std::mt19937_64 cell_rng(unsigned long long seed, size_t cell, unsigned salt) {
  std::seed_seq seq{static_cast<unsigned>(seed & 0xffffffffu), static_cast<unsigned>(seed >> 32),
                    static_cast<unsigned>(cell), salt};
  return std::mt19937_64(seq);
}

Record failed(const std::string& name, const std::string& group, const std::string& why) {
  Record r;
  r.name = name;
  r.group = group;
  r.verdict = Verdict::fail;
  r.note = why;
  return r;
}

Record skipped(const std::string& name, const std::string& group, const std::string& why) {
  Record r;
  r.name = name;
  r.group = group;
  r.verdict = Verdict::skip;
  r.note = why;
  return r;
}

// Cells run concurrently; results are merged in cell order so reports do not depend on scheduling.
std::vector<CellOut> run_cells(const std::vector<Cell>& cells, int parallel,
                               const std::function<CellOut(const Cell&, size_t)>& fn) {
  std::vector<CellOut> out(cells.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next++) < cells.size();) {
      try {
        out[i] = fn(cells[i], i);
      } catch (const std::exception& e) {
        out[i] = CellOut{};
        out[i].records.push_back(failed(cells[i].label, "cell", e.what()));
      }
    }
  };
  int threads = std::max(1, std::min<int>(parallel, static_cast<int>(cells.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

void merge(Report& rep, std::vector<CellOut>&& outs, Plot* plot = nullptr, std::string* rows = nullptr) {
  for (auto& o : outs) {
    for (auto& r : o.records) rep.add(std::move(r));
    for (auto& w : o.warnings) rep.warnings.push_back(std::move(w));
    for (auto& [k, v] : o.constants) rep.constant(k, v);
    for (auto& [k, v] : o.files) rep.files[k] = std::move(v);
    if (plot)
      for (auto& s : o.series) plot->series.push_back(std::move(s));
    if (rows) *rows += o.rows;
  }
}

using GammaCheck = std::function<void(const SphereGeometry&, double)>;

// Explicit --gamma values must be supported for at least one n; sweep points and defaults are filtered.
std::vector<Cell> gamma_cells(const RunConfig& cfg, const std::vector<int>& ns,
                              const std::function<std::vector<double>(int)>& defaults, const GammaCheck& check,
                              Report& rep) {
  std::vector<Cell> cells;
  auto try_add = [&](int n, double g) {
    try {
      check(SphereGeometry(n), g);
    } catch (const Error& e) {
      rep.add(skipped(cell_label(n, g), "validation", e.what()));
      return std::string(e.what());
    }
    cells.push_back({n, g, cell_label(n, g)});
    return std::string();
  };
  if (cfg.gamma.empty() && !cfg.gamma_range) {
    for (int n : ns)
      for (double g : defaults(n)) try_add(n, g);
    return cells;
  }
  for (double g : cfg.gamma) {
    bool ok = false;
    std::string why;
    for (int n : ns) {
      std::string w = try_add(n, g);
      if (w.empty()) ok = true;
      else why = w;
    }
    if (!ok) throw ConfigError("gamma = " + fmt(g) + " is not supported: " + why);
  }
  if (cfg.gamma_range)
    for (double g : linspace(cfg.gamma_range->lo, cfg.gamma_range->hi, cfg.gamma_range->count))
      for (int n : ns) try_add(n, g);
  return cells;
}

// amp * B_l / B_l(1); bounded by |amp| since |B_l| <= B_l(1)
ZonalFunction bounded_mode(const SphereGeometry& geo, int l, double amp) {
  return ZonalFunction::mode(geo, l, amp / basis_eval(geo, l, 1.0));
}

// ---------------------------------------------------------------- funk-hecke

CellOut funk_hecke_cell(const RunConfig& cfg, const Cell& c, int L, double tol) {
  CellOut o;
  SphereGeometry geo(c.n);
  const double g = c.value;
  if (is_kernel_pole(geo, g)) {
    o.records.push_back(skipped(c.label, "eigenvalue",
                                "gamma - n/2 is a nonnegative integer: Gamma(n/2 - gamma) has a pole"));
    return o;
  }
  const int M = cfg.grid > 0 ? cfg.grid : L + 4;
  for (int l = 0; l <= L; ++l) {
    double closed = funk_hecke_power_closed_form(geo, g, l);
    double q1 = funk_hecke_power_kernel(geo, g, l, M);
    double q2 = funk_hecke_power_kernel(geo, g, l, 2 * M);
    Record r;
    r.name = c.label + " l=" + std::to_string(l);
    r.group = "eigenvalue";
    r.lhs = q1;
    r.rhs = closed;
    r.deficit = q1 - closed;
    r.relative = rel(q1, closed);
    r.has_refinement = true;
    r.refinement[0] = r.relative;
    r.refinement[1] = rel(q2, closed);
    r.tolerance = tol;
    r.verdict = r.relative < tol ? Verdict::pass : Verdict::fail;
    if (r.verdict == Verdict::fail)
      r.note = "underresolved on " + std::to_string(M) + " nodes: relative error " + sci(r.refinement[0]) + ", " +
               sci(r.refinement[1]) + " on " + std::to_string(2 * M) + "; raise --grid";
    o.records.push_back(r);
    o.rows += std::to_string(c.n) + "," + decimal(g) + "," + std::to_string(l) + "," + decimal(q1) + "," +
              decimal(closed) + "," + decimal(r.relative) + "\n";
  }
  o.constants.push_back({"lambda_0[" + c.label + "]", funk_hecke_power_closed_form(geo, g, 0)});
  return o;
}

// ---------------------------------------------------------------- sobolev

CellOut sobolev_cell(const RunConfig& cfg, const Cell& c, size_t idx, bool reverse) {
  CellOut o;
  SphereGeometry geo(c.n);
  const double g = c.value;
  const double tol = tol_or(cfg, 1e-6);
  auto rng = cell_rng(cfg.seed, idx, reverse ? 2 : 1);

  for (double a : {0.0, 0.3, -0.3, 0.6, -0.6}) {
    DeficitReport r = sobolev_deficit(extremal_profile(a, g, geo), g, cfg.grid);
    Record rec = record_from(r, c.label + " extremal a=" + fmt(a), "extremal");
    rec.tolerance = tol;
    rec.verdict = std::fabs(r.relative) < tol ? Verdict::pass : Verdict::fail;
    o.records.push_back(rec);
  }

  const int N = samples_or(cfg, 100), L = modes_or(cfg, 8);
  DeficitReport worst;
  worst.relative = INFINITY;
  for (int k = 0; k < N; ++k) {
    DeficitReport r = sobolev_deficit(random_positive(geo, L, rng), g, cfg.grid);
    if (r.relative < worst.relative) worst = r;
  }
  Record rec = record_from(worst, c.label + " random worst of " + std::to_string(N), "random");
  rec.tolerance = 1e-8;
  rec.verdict = worst.relative >= -1e-8 ? Verdict::pass : Verdict::fail;
  o.records.push_back(rec);

  if (reverse) {
    ZonalFunction p = extremal_profile(0.3, g, geo);
    p.coeffs[0] -= grid_min(p);
    DeficitReport z = nonneg_energy_check(p, g, cfg.grid);
    Record zr = lower_bound_record(c.label + " zero-touching", "zero", z.lhs, 0.0, 1e-8);
    zr.note = "min f = 0: routed to the nonnegative energy check";
    o.records.push_back(zr);
  }

  ZonalFunction base = extremal_profile(0.3, g, geo);
  const double floor_value = grid_min(base);
  PlotSeries s{c.label, {}, {}};
  for (double eps : linspace(0.0, 0.5, 11)) {
    ZonalFunction f = base + bounded_mode(geo, 2, eps * floor_value);
    s.x.push_back(eps);
    s.y.push_back(sobolev_deficit(f, g, cfg.grid).relative);
  }
  o.series.push_back(s);
  o.constants.push_back({"S[" + c.label + "]", sobolev_constant(geo, g)});
  return o;
}

Report sobolev_suite(const RunConfig& cfg, bool reverse) {
  Report rep;
  auto defaults = [reverse](int n) {
    double h = 0.5 * n;
    if (reverse) return std::vector<double>{h + 0.3, h + 0.7, h + 1.3, h + 1.7};
    return std::vector<double>{0.1 * n, 0.25 * n, 0.4 * n};
  };
  auto check = [reverse](const SphereGeometry& geo, double g) {
    check_sobolev_gamma(geo, g);
    if (reverse != (g > 0.5 * geo.n))
      throw UnsupportedGamma(reverse ? "reverse-sobolev needs gamma > n/2" : "sobolev needs gamma < n/2");
  };
  auto cells = gamma_cells(cfg, n_or(cfg, {1, 2, 3}), defaults, check, rep);
  Plot plot{reverse ? "reverse_sobolev_deficit" : "sobolev_deficit", "relative deficit under a degree-2 perturbation",
            "amplitude", "relative deficit", {}};
  merge(rep, run_cells(cells, cfg.parallel, [&](const Cell& c, size_t i) { return sobolev_cell(cfg, c, i, reverse); }),
        &plot);
  rep.plots.push_back(plot);
  return rep;
}

// ---------------------------------------------------------------- beckner

CellOut beckner_cell(const RunConfig& cfg, const Cell& c, size_t idx) {
  CellOut o;
  const int n = c.n;
  SphereGeometry geo(n);
  const double tol = tol_or(cfg, 1e-7);
  auto rng = cell_rng(cfg.seed, idx, 3);
  for (double a : {0.0, 0.3, -0.5}) {
    ZonalFunction f = project([&](double t) { return 0.7 + n * std::log(conformal_factor(a, t)); }, geo, 80);
    DeficitReport r = beckner_deficit(f, cfg.grid);
    Record rec = record_from(r, c.label + " extremal a=" + fmt(a), "extremal");
    rec.tolerance = tol;
    rec.verdict = std::fabs(r.deficit) <= tol * std::max(1.0, std::fabs(r.lhs)) ? Verdict::pass : Verdict::fail;
    o.records.push_back(rec);
  }
  const int N = samples_or(cfg, 100), L = modes_or(cfg, 8);
  DeficitReport worst;
  worst.deficit = INFINITY;
  double worst_scaled = INFINITY;
  for (int k = 0; k < N; ++k) {
    DeficitReport r = beckner_deficit(random_band_limited(geo, L, rng), cfg.grid);
    double scaled = r.deficit / std::max(1.0, std::fabs(r.lhs));
    if (scaled < worst_scaled) {
      worst_scaled = scaled;
      worst = r;
    }
  }
  Record rec = record_from(worst, c.label + " random worst of " + std::to_string(N), "random");
  rec.tolerance = 1e-8;
  rec.verdict = worst_scaled >= -1e-8 ? Verdict::pass : Verdict::fail;
  o.records.push_back(rec);

  PlotSeries s{c.label, {}, {}};
  for (double eps : linspace(0.0, 1.0, 11)) {
    s.x.push_back(eps);
    s.y.push_back(beckner_deficit(ZonalFunction::mode(geo, 1, eps, 2), cfg.grid).deficit);
  }
  o.series.push_back(s);
  return o;
}

// ---------------------------------------------------------------- reverse hls

CellOut hls_cell(const RunConfig& cfg, const Cell& c, size_t idx) {
  CellOut o;
  const int n = c.n;
  const double lambda = c.value;
  SphereGeometry geo(n);
  const double tol = tol_or(cfg, 1e-7);
  auto rng = cell_rng(cfg.seed, idx, 4);
  const int N = samples_or(cfg, 100), L = modes_or(cfg, 6);
  double worst = INFINITY;
  DeficitReport wr;
  for (int k = 0; k < N; ++k) {
    ZonalFunction f = random_positive(geo, L, rng), g = random_positive(geo, L, rng);
    DeficitReport r = reverse_hls_ratio(f, g, lambda, cfg.grid);
    if (r.extras.at("ratio") < worst) {
      worst = r.extras.at("ratio");
      wr = r;
    }
  }
  Record rec = lower_bound_record(c.label + " random worst ratio of " + std::to_string(N), "random", worst, 1.0, 1e-8);
  rec.has_refinement = wr.has_refinement;
  rec.refinement[0] = wr.refinement_coarse;
  rec.refinement[1] = wr.refinement_fine;
  o.records.push_back(rec);

  const double e = 0.5 * (2 * n + lambda);
  for (double a : {0.0, 0.3, -0.5}) {
    ZonalFunction p = project([&](double t) { return std::pow(conformal_factor(a, t), e); }, geo, 64);
    DeficitReport r = reverse_hls_ratio(p, p, lambda, cfg.grid);
    double ratio = r.extras.at("ratio");
    Record x = residual_record(c.label + " extremal a=" + fmt(a), "extremal", ratio - 1.0, tol);
    x.lhs = ratio;
    x.rhs = 1.0;
    o.records.push_back(x);
  }
  o.constants.push_back({"C[" + c.label + "]", reverse_hls_constant(geo, lambda)});
  return o;
}

// ---------------------------------------------------------------- duality

CellOut duality_cell(const RunConfig& cfg, const Cell& c, size_t idx) {
  CellOut o;
  SphereGeometry geo(c.n);
  const double gamma = c.value;
  const double tol = tol_or(cfg, 1e-7);
  auto rng = cell_rng(cfg.seed, idx, 5);
  const int N = samples_or(cfg, 100), L = modes_or(cfg, 6);
  DeficitReport worst;
  worst.relative = INFINITY;
  double decomp = 0.0, inverse = 0.0;
  for (int k = 0; k < N; ++k) {
    ZonalFunction f = random_positive(geo, L, rng), g = random_positive(geo, L, rng);
    DeficitReport r = duality_gap(f, g, gamma);
    if (r.relative < worst.relative) worst = r;
    DualityTerms d = duality_terms(f, g, gamma);
    decomp = std::max(decomp, std::fabs(d.decomposition_lhs - d.decomposition_rhs) /
                                  std::max(1.0, std::fabs(d.decomposition_rhs)));
    inverse = std::max(inverse, rel(r.extras.at("inverse_form_kernel"), r.extras.at("inverse_form_spectral")));
  }
  Record rec = record_from(worst, c.label + " random worst of " + std::to_string(N), "random");
  rec.tolerance = 1e-8;
  rec.verdict = worst.relative >= -1e-8 ? Verdict::pass : Verdict::fail;
  o.records.push_back(rec);
  o.records.push_back(residual_record(c.label + " decomposition identity", "decomposition", decomp, 1e-9));
  o.records.push_back(residual_record(c.label + " kernel vs spectral inverse", "inverse", inverse, 1e-9));

  ZonalFunction one = ZonalFunction::constant(geo, 1.0, 4);
  ZonalFunction g = one + ZonalFunction::mode(geo, 2, 0.05, 4) + ZonalFunction::mode(geo, 1, 0.1, 4);
  ZonalFunction f(geo, g.L());
  for (int l = 0; l <= g.L(); ++l) f.coeffs[l] = -2.5 * g.coeffs[l] / gjms_multiplier(geo, gamma, l);
  DeficitReport eq = duality_gap(f, g, gamma);
  Record er = record_from(eq, c.label + " equality f = -c P^{-1} g", "equality");
  er.tolerance = tol;
  er.verdict = std::fabs(eq.relative) < tol ? Verdict::pass : Verdict::fail;
  o.records.push_back(er);
  return o;
}

// ---------------------------------------------------------------- stability

CellOut stability_cell(const RunConfig& cfg, const Cell& c, size_t idx) {
  CellOut o;
  SphereGeometry geo(c.n);
  const double gamma = c.value;
  const double tol = tol_or(cfg, 1e-7);
  auto rng = cell_rng(cfg.seed, idx, 6);
  const int N = samples_or(cfg, 50), L = modes_or(cfg, 6);
  double min_lb = INFINITY, min_gap = INFINITY, max_rel = 0.0, gap_lhs = 0.0, gap_rhs = 0.0;
  int errors = 0;
  std::string first_error;
  for (int k = 0; k < N; ++k) {
    ZonalFunction f = unit(random_positive(geo, L, rng));
    try {
      StabilityReport s = stability_bound(f, gamma, cfg.grid);
      min_lb = std::min(min_lb, s.lower_bound);
      if (s.deficit - s.lower_bound < min_gap) {
        min_gap = s.deficit - s.lower_bound;
        gap_lhs = s.deficit;
        gap_rhs = s.lower_bound;
      }
      max_rel = std::max(max_rel, rel(s.lower_bound_pushforward, s.lower_bound));
    } catch (const Error& e) {
      if (errors++ == 0) first_error = e.what();
    }
  }
  if (errors)
    o.records.push_back(failed(c.label + " solver", "random",
                               std::to_string(errors) + " of " + std::to_string(N) + " cases failed: " + first_error));
  o.records.push_back(lower_bound_record(c.label + " lower bound nonnegative", "random", min_lb, 0.0, 0.0));
  o.records.push_back(lower_bound_record(c.label + " deficit above bound, worst of " + std::to_string(N), "random",
                                         gap_lhs, gap_rhs, 1e-8));
  o.records.push_back(residual_record(c.label + " spectral vs pushforward bound", "routes", max_rel, tol));

  ZonalFunction J = extremal_profile(0.4, gamma, geo);
  StabilityReport e = stability_bound(unit(J), gamma, cfg.grid);
  o.records.push_back(residual_record(c.label + " extremal deficit", "extremal", e.deficit, 1e-8));
  o.records.push_back(residual_record(c.label + " extremal lower bound", "extremal", e.lower_bound, 1e-8));

  const double floor_value = grid_min(J);
  PlotSeries d{"deficit " + c.label, {}, {}}, b{"lower bound " + c.label, {}, {}};
  for (double eps : linspace(0.0, 0.5, 11)) {
    StabilityReport s = stability_bound(unit(J + bounded_mode(geo, 2, eps * floor_value)), gamma, cfg.grid);
    d.x.push_back(eps);
    d.y.push_back(s.deficit);
    b.x.push_back(eps);
    b.y.push_back(s.lower_bound);
  }
  o.series.push_back(d);
  o.series.push_back(b);
  return o;
}

// ---------------------------------------------------------------- scattering

CellOut scattering_cell(const RunConfig& cfg, const Cell& c, size_t idx) {
  CellOut o;
  const int n = c.n;
  SphereGeometry geo(n);
  const double g = c.value;
  const double tol = tol_or(cfg, 1e-8);
  auto rng = cell_rng(cfg.seed, idx, 7);
  const int L = modes_or(cfg, 10);

  PoissonSolution sol(random_band_limited(geo, L, rng), g);
  PoissonSolution unit_sol(ZonalFunction::constant(geo, 1.0), g);
  double worst = 0.0;
  Record agree;
  for (double r : {0.1, 0.3, 0.5, 0.7, 0.9})
    for (double t : {-0.9, -0.4, 0.0, 0.3, 0.8}) {
      double a = poisson_eval_series(sol, {r, t});
      double b = poisson_eval_integral(sol, {r, t});
      double scale = std::max(std::fabs(a), 1e-3 * poisson_eval_series(unit_sol, {r, t}));
      double e = std::fabs(a - b) / scale;
      if (e >= worst) {
        worst = e;
        agree = residual_record(c.label + " series vs integral, worst of 25", "series-integral", e, tol);
        agree.lhs = b;
        agree.rhs = a;
        agree.deficit = b - a;
        agree.note = "worst at r=" + fmt(r) + " t=" + fmt(t);
      }
    }
  o.records.push_back(agree);

  double oi = poisson_origin_integral_form(geo, g), os = poisson_origin_series_form(geo, g);
  Record orec = residual_record(c.label + " origin value", "origin", rel(oi, os), 1e-12);
  orec.lhs = oi;
  orec.rhs = os;
  o.records.push_back(orec);

  PoissonSolution smooth(ZonalFunction::constant(geo, 1.5) + random_band_limited(geo, 6, rng), g);
  double pde = 0.0;
  for (double r : {0.2, 0.5, 0.8})
    for (double t : {-0.6, 0.1, 0.7}) pde = std::max(pde, pde_residual(smooth, {r, t}));
  o.records.push_back(residual_record(c.label + " equation residual, worst of 9", "pde", pde, 1e-5));

  // boundary limit: rho0^{s-n} u -> f
  PoissonSolution bsol(ZonalFunction::constant(geo, 2.0) + random_band_limited(geo, 5, rng), g);
  for (double t : {-0.5, 0.2}) {
    double prev = INFINITY;
    bool decreasing = true;
    std::vector<std::string> flagged;
    double err = 0.0;
    for (int k = 1; k <= 4; ++k) {
      BallPoint p{1.0 - std::pow(10.0, -k), t};
      PoissonValue v = poisson_eval_integral_with_report(bsol, p);
      err = std::fabs(std::pow(p.rho0(), bsol.s - n) * v.value - bsol.f(t));
      decreasing = decreasing && err < prev;
      prev = err;
      if (v.near_boundary) flagged.push_back(fmt(p.r));
    }
    Record rec;
    rec.name = c.label + " boundary limit t=" + fmt(t);
    rec.group = "boundary-limit";
    rec.lhs = err;
    rec.deficit = err;
    rec.relative = err / std::fabs(bsol.f(t));
    rec.verdict = decreasing ? Verdict::pass : Verdict::fail;
    std::string fl;
    for (const auto& s : flagged) fl += (fl.empty() ? "" : ", ") + s;
    rec.note = std::string(decreasing ? "error decreasing" : "error not decreasing") +
               (fl.empty() ? "" : "; flagged unstable near the boundary at r = " + fl);
    o.records.push_back(rec);
  }

  const int order = cfg.jet_order > 0 ? cfg.jet_order : 14;
  double mult = 0.0, jet = 0.0;
  for (int l = 0; l <= 20; ++l) {
    double m = scattering_multiplier(geo, g, l);
    double expect = c_gamma_inverse(g) * gamma_ratio_real(l + 0.5 * n + g, l + 0.5 * n - g);
    double lead = extension_jet(geo, l, g, order).coefficient(0.5 * n + g).coeffs[l];
    mult = std::max(mult, rel(m, expect));
    jet = std::max(jet, rel(lead, m));
  }
  o.records.push_back(residual_record(c.label + " multipliers l<=20", "multiplier", mult, 1e-10));
  o.records.push_back(residual_record(c.label + " extension jet leading coefficients l<=20", "jet", jet, 1e-10));

  PoissonSolution zero(ZonalFunction(geo, 4), g);
  double zmax = 0.0;
  for (double r : {0.0, 0.4, 0.8}) {
    zmax = std::max(zmax, std::fabs(poisson_eval_series(zero, {r, 0.3})));
    zmax = std::max(zmax, std::fabs(poisson_eval_integral(zero, {r, 0.3})));
  }
  o.records.push_back(residual_record(c.label + " zero data", "zero", zmax, 0.0));

  std::ostringstream csv;
  write_solution_csv(csv, sol, linspace(0.0, 0.95, 20), linspace(-1.0, 1.0, 21));
  o.files["scattering_solution_n" + std::to_string(n) + "_g" + fmt(g) + ".csv"] = csv.str();
  o.constants.push_back({"c_gamma[gamma=" + fmt(g) + "]", c_gamma(g)});
  return o;
}

// ---------------------------------------------------------------- boundary

CellOut boundary_cell(const RunConfig& cfg, const Cell& c, size_t idx) {
  CellOut o;
  const int n = c.n;
  SphereGeometry geo(n);
  const double g = c.value;
  auto rng = cell_rng(cfg.seed, idx, 8);
  const int L = modes_or(cfg, 6);
  const GammaSplit s = split_gamma(g);
  const int M = cfg.jet_order > 0 ? cfg.jet_order : default_jet_order(g);

  // normalization, annihilation, cross-branch
  ZonalFunction f = random_band_limited(geo, L, rng);
  double norm = 0.0, ann = 0.0, cross = 0.0;
  for (int j = 0; j <= s.small_int_max(); ++j) {
    norm = std::max(norm, diff(boundary_op_small(monomial_jet(f, g, 2 * j, M), j, Family::integer), f) / maxc(f));
    for (int m = 1; m <= 3; ++m)
      ann = std::max(ann, maxc(boundary_op_small(monomial_jet(f, g, 2 * j + 2 * m, M), j, Family::integer)));
    for (int m = 0; m <= 3; ++m)
      cross = std::max(cross, maxc(boundary_op_small(monomial_jet(f, g, 2 * s.frac + 2 * m, M), j, Family::integer)));
  }
  for (int j = 0; j <= s.small_frac_max(); ++j) {
    double e = 2 * j + 2 * s.frac;
    norm = std::max(norm, diff(boundary_op_small(monomial_jet(f, g, e, M), j, Family::fractional), f) / maxc(f));
    for (int m = 1; m <= 3; ++m)
      ann = std::max(ann, maxc(boundary_op_small(monomial_jet(f, g, e + 2 * m, M), j, Family::fractional)));
    for (int m = 0; m <= 3; ++m)
      cross = std::max(cross, maxc(boundary_op_small(monomial_jet(f, g, 2 * m, M), j, Family::fractional)));
  }
  o.records.push_back(residual_record(c.label + " normalization", "normalization", norm, 1e-12));
  o.records.push_back(residual_record(c.label + " annihilation", "annihilation", ann, 0.0));
  o.records.push_back(residual_record(c.label + " cross-branch annihilation", "cross-branch", cross, 0.0));

  // peel-off of a generic expansion
  RhoJet U = zero_jet(geo, g, M, L);
  for (int m = 0; m <= M; ++m) {
    U.branch1[m] = random_band_limited(geo, L, rng);
    U.branch2[m] = random_band_limited(geo, L, rng);
  }
  double peel = 0.0;
  RhoJet rest = U;
  for (int j = 0; j <= s.small_int_max(); ++j) {
    ZonalFunction fj = boundary_op_small(rest, j, Family::integer);
    peel = std::max(peel, diff(fj, U.branch1[j]) / (1 + maxc(U.branch1[j])));
    rest -= monomial_jet(fj, g, 2 * j, M);
  }
  rest = U;
  for (int j = 0; j <= s.small_frac_max(); ++j) {
    ZonalFunction fj = boundary_op_small(rest, j, Family::fractional);
    peel = std::max(peel, diff(fj, U.branch2[j]) / (1 + maxc(U.branch2[j])));
    rest -= monomial_jet(fj, g, 2 * s.frac + 2 * j, M);
  }
  o.records.push_back(residual_record(c.label + " expansion peel-off", "peel-off", peel, 1e-10));

  // intrinsic identity on the Dirichlet extension
  BoundaryData d = random_boundary_data(geo, g, L, rng);
  RhoJet Ut = dirichlet_extend(d, g, M);
  double intr = 0.0;
  for (int j = 0; j <= s.half; ++j) {
    double gp = g - 2 * j;
    ZonalFunction expect = c_gamma_inverse(gp) * apply_spectrum(gjms_spectrum(geo, gp, L), d.f2j[j]);
    intr = std::max(intr, diff(boundary_op_intrinsic(Ut, s.floor - j, Family::fractional), expect) / (1 + maxc(expect)));
  }
  for (int m = 0; m <= s.small_frac_max(); ++m) {
    double gp = s.floor - s.frac - 2 * m;
    ZonalFunction expect = c_gamma_inverse(gp) * apply_spectrum(gjms_spectrum(geo, gp, L), d.phi2m[m]);
    intr = std::max(intr, diff(boundary_op_intrinsic(Ut, s.floor - m, Family::integer), expect) / (1 + maxc(expect)));
  }
  o.records.push_back(residual_record(c.label + " intrinsic identity", "intrinsic", intr, 1e-9));

  // Q symmetry and sigma/zeta agreement
  double sym = 0.0, forms = 0.0;
  for (int rep = 0; rep < 3; ++rep) {
    BallField A = make_field(random_boundary_data(geo, g, L, rng), g, M);
    BallField B = make_field(random_boundary_data(geo, g, L, rng), g, M);
    double ab = dirichlet_form(A, B), ba = dirichlet_form(B, A);
    double scale = std::fabs(ab) + std::fabs(dirichlet_form(A, A)) + std::fabs(dirichlet_form(B, B));
    sym = std::max(sym, std::fabs(ab - ba) / scale);
    FormReport aa = dirichlet_form_report(A, A);
    forms = std::max(forms, std::fabs(aa.sigma_form - aa.zeta_form) / std::fabs(aa.zeta_form));
  }
  o.records.push_back(residual_record(c.label + " Q symmetry", "symmetry", sym, 1e-8));
  o.records.push_back(residual_record(c.label + " sigma form vs zeta form", "symmetry", forms, 1e-9));

  // energy inequality along a kernel-aligned perturbation
  {
    BoundaryData dd = random_boundary_data(geo, g, 5, rng);
    double e = 0.5 * n - g + 2 * (s.half + 1);
    int l = 2;
    ZonalFunction h = ZonalFunction::mode(geo, l, 1.0 / std::sqrt(mode_norm(geo, l)));
    double q = l + 2 * s.floor + 6;
    Perturbation base{{{{1.0, e, q}, {-0.4, e + 2, q}}}, h};
    std::vector<double> gaps;
    double min_gap = INFINITY;
    FormReport at_min;
    for (double eps : {0.1, 0.2, 0.4}) {
      Perturbation p = base;
      p.w *= eps;
      FormReport r = dirichlet_form_report(make_field(dd, g, M, p), make_field(dd, g, M, p));
      gaps.push_back(r.value - r.zeta_form);
      if (gaps.back() < min_gap) {
        min_gap = gaps.back();
        at_min = r;
      }
    }
    o.records.push_back(
        lower_bound_record(c.label + " energy inequality", "energy", at_min.value, at_min.zeta_form, 1e-8));
    double growth = std::max(rel(gaps[1] / gaps[0], 4.0), rel(gaps[2] / gaps[1], 4.0));
    Record gr = residual_record(c.label + " energy gap grows like eps^2", "energy", growth, 1e-8);
    gr.note = "gap ratios " + fmt(gaps[1] / gaps[0]) + ", " + fmt(gaps[2] / gaps[1]);
    o.records.push_back(gr);
  }

  // conformal covariance for the small indices
  ZonalFunction tau = ZonalFunction::mode(geo, 1, 0.3);
  double cov = 0.0;
  for (int j = 0; j <= s.small_int_max(); ++j) cov = std::max(cov, conformal_covariance_check(Ut, {tau}, j, Family::integer));
  for (int j = 0; j <= s.small_frac_max(); ++j)
    cov = std::max(cov, conformal_covariance_check(Ut, {tau, 0.1 * tau}, j, Family::fractional));
  o.records.push_back(residual_record(c.label + " conformal covariance", "covariance", cov, 1e-8));
  return o;
}

std::string coefficient_table(const BoundaryCoefficients& bc) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "gamma = %g  (floor %d, frac %g)\n", bc.gamma, bc.split.floor, bc.split.frac);
  os << buf;
  os << "   j        b_2j   b_2j+2[g]       b_big       sigma        zeta\n";
  auto at = [&](const std::vector<double>& v, int k) {
    if (k >= static_cast<int>(v.size())) return std::string("          -");
    std::snprintf(buf, sizeof buf, "%11.4e", v[k]);
    return std::string(buf);
  };
  for (int j = 0; j <= bc.split.floor; ++j)
    os << std::string(3 - std::to_string(j).size() + 1, ' ') << j << ' ' << at(bc.b_small, j) << ' '
       << at(bc.b_small_frac, j) << ' ' << at(bc.b_large, j) << ' ' << at(bc.sigma, j) << ' ' << at(bc.zeta, j)
       << '\n';
  return os.str();
}

void boundary_globals(const RunConfig& cfg, const std::vector<int>& ns, Report& rep) {
  const double tol = tol_or(cfg, 1e-6);
  // coefficient identities on a 400-point grid in (0, 4) without the integers
  double zmin = INFINITY, b1 = 0, b2 = 0, sg = 0, zt = 0;
  for (int k = 0; k < 400; ++k) {
    double g = 4.0 * (k + 0.5) / 400.0;
    BoundaryCoefficients bc = boundary_coeffs(g);
    for (size_t j = 0; j < bc.b_small.size(); ++j) b1 = std::max(b1, rel(bc.b_small_closed[j], bc.b_small[j]));
    for (size_t j = 0; j < bc.b_small_frac.size(); ++j)
      b2 = std::max(b2, rel(4.0 * bc.b_small_frac_closed[j], bc.b_small_frac[j]));
    for (size_t j = 0; j < bc.sigma.size(); ++j) {
      sg = std::max(sg, rel(bc.sigma_closed[j], bc.sigma[j]));
      double extra = static_cast<int>(j) <= bc.split.half ? 1.0 : std::pow(2.0, 4.0 * j);
      zt = std::max(zt, rel(bc.zeta_closed[j], extra * bc.zeta[j]));
      zmin = std::min(zmin, bc.zeta[j]);
    }
  }
  rep.add(lower_bound_record("zeta positive on 400 gammas", "coefficients", zmin, 0.0, 0.0));
  if (!(zmin > 0.0)) rep.records.back().verdict = Verdict::fail;
  rep.add(residual_record("b_2j closed vs product", "coefficients", b1, 1e-10));
  Record fr = residual_record("b_2j+2[g] closed vs product", "coefficients", b2, 1e-10);
  fr.note = "closed form scaled by 4";
  rep.add(fr);
  rep.add(residual_record("sigma closed vs product", "coefficients", sg, 1e-10));
  Record zr = residual_record("zeta closed vs defining value", "coefficients", zt, 1e-10);
  zr.note = "large indices compared with a 2^{4j} factor";
  rep.add(zr);
  BoundaryCoefficients half = boundary_coeffs(0.5);
  rep.add(residual_record("sigma_0 at gamma=1/2", "coefficients", half.sigma[0] - 1.0, 1e-14));
  rep.add(residual_record("zeta_0 at gamma=1/2", "coefficients", half.zeta[0] - 1.0, 1e-14));
  rep.add(residual_record("c_gamma at gamma=1/2", "coefficients", c_gamma(0.5) + 1.0, 1e-14));

  auto rng = cell_rng(cfg.seed, 1u << 20, 9);
  const int N = samples_or(cfg, 20);
  auto trace_cell = [&](const std::string& label, const SphereGeometry& geo, double g,
                        const std::vector<ZonalFunction>& extremal, const std::function<BoundaryData()>& random) {
    for (size_t k = 0; k < extremal.size(); ++k) {
      DeficitReport r = trace_deficit({{extremal[k]}, {}}, g, geo, cfg.jet_order > 0 ? cfg.jet_order : -1);
      Record rec = record_from(r, label + " extremal " + std::to_string(k), "trace");
      rec.tolerance = tol;
      rec.verdict = std::fabs(r.deficit) <= tol * std::max(1.0, r.lhs) ? Verdict::pass : Verdict::fail;
      rep.add(rec);
    }
    DeficitReport worst;
    double ws = INFINITY;
    for (int k = 0; k < N; ++k) {
      DeficitReport r = trace_deficit(random(), g, geo, cfg.jet_order > 0 ? cfg.jet_order : -1);
      double sc = r.deficit / std::max(1.0, std::fabs(r.lhs));
      if (sc < ws) {
        ws = sc;
        worst = r;
      }
    }
    Record rec = record_from(worst, label + " random worst of " + std::to_string(N), "trace");
    rec.tolerance = 1e-8;
    rec.verdict = ws >= -1e-8 ? Verdict::pass : Verdict::fail;
    rec.note = trace_case_label(geo, g);
    rep.add(rec);
    if (worst.extras.at("large_range_empty") == 1.0) {
      Record e = residual_record(label + " large-index part", "trace", worst.extras.at("rhs_large"), 0.0);
      e.note = "empty range: right-hand side 0";
      rep.add(e);
      rep.warnings.push_back(label + ": no large index in range, its right-hand side is 0");
    }
  };

  for (int n : ns) {
    SphereGeometry geo(n);
    std::string tag = "trace n=" + std::to_string(n);
    if (n == 1) {
      std::vector<ZonalFunction> ext;
      for (double a : {0.0, 0.3, -0.5})
        ext.push_back(project([&](double t) { return std::log(conformal_factor(a, t)); }, geo, 80));
      trace_cell(tag + " gamma=0.5 (logarithmic)", geo, 0.5, ext,
                 [&] { return BoundaryData{{random_band_limited(geo, 10, rng)}, {}}; });
    } else {
      std::vector<ZonalFunction> ext;
      for (double a : {0.0, 0.3, -0.5}) ext.push_back(extremal_profile(a, 0.5, geo, 48));
      trace_cell(tag + " gamma=0.5", geo, 0.5, ext, [&] { return BoundaryData{{random_band_limited(geo, 8, rng)}, {}}; });
    }
    if (n == 3)
      trace_cell(tag + " gamma=2.6", geo, 2.6, {}, [&] {
        BoundaryData d = random_boundary_data(geo, 2.6, 6, rng);
        d.f2j[0] = random_positive(geo, 6, rng);
        return d;
      });
  }

  // Green identity and Hardy inequality by 2D quadrature
  for (int n : ns) {
    SphereGeometry geo(n);
    const double h = 0.5 * n, g = 0.7;
    struct Pair {
      RadialMode U, V;
      const char* name;
    };
    std::vector<Pair> pairs = {
        {{{{{1.0, h + 0.4, 0.0}}}, 0}, {{{{1.0, h + 1.1, 0.0}}}, 0}, "decaying pair"},
        {{{{{1.0, h - g, 6.0}}}, 2}, {{{{1.0, h + g, 6.0}, {0.5, h + g + 2, 6.0}}}, 2}, "two branches"},
    };
    for (const auto& p : pairs) {
      GreenReport r = green_identity_check(p.U, p.V, geo);
      Record rec = residual_record("green n=" + std::to_string(n) + " " + p.name, "green",
                                   r.residual / std::max(1.0, std::fabs(r.boundary)), 1e-6);
      rec.lhs = r.interior;
      rec.rhs = -r.boundary;
      rec.note = "quadrature error estimate " + sci(r.quadrature_error);
      rep.add(rec);
    }
    for (double beta : {0.9, 1.2, 2.0}) {
      const double c = 1.0;
      HardyProfile V{[=](double r, double om) { return c * std::pow(om * (1 + r), beta); },
                     [=](double r, double om) { return -2 * beta * r * c * std::pow(om * (1 + r), beta - 1); }, 0};
      DeficitReport r = hardy_check(V, geo);
      // v = (1 - r^2)^beta: both integrals are Beta functions
      double vol = mode_norm(geo, 0);
      double grad = vol * 2 * beta * beta * c * c * std::beta((n + 3) / 2.0, 2 * beta - 1);
      double hard = vol * 0.5 * c * c * std::beta((n + 1) / 2.0, 2 * beta - 1);
      std::string name = "hardy n=" + std::to_string(n) + " beta=" + fmt(beta);
      Record q = residual_record(name + " quadrature", "hardy", std::max(rel(r.lhs, grad), rel(r.rhs, hard)), 1e-6);
      q.lhs = r.lhs;
      q.rhs = grad;
      rep.add(q);
      Record d = record_from(r, name + " deficit", "hardy");
      d.verdict = r.deficit >= 0.0 ? Verdict::pass : Verdict::fail;
      rep.add(d);
    }
  }
}

// ---------------------------------------------------------------- counterexample

CellOut counterexample_cell(const RunConfig& cfg, const Cell& c, size_t idx) {
  CellOut o;
  SphereGeometry geo(c.n);
  SearchOptions opts;
  if (cfg.budget > 0) opts.budget = cfg.budget;
  opts.modes = modes_or(cfg, opts.modes);
  opts.seed = cfg.seed + idx;
  opts.grid = cfg.grid;
  try {
    DeficitReport r = counterexample_search(c.value, geo, opts);
    Record rec = record_from(r, c.label + " search", "counterexample");
    bool certified = r.extras.count("certified") && r.extras.at("certified") == 1.0;
    rec.verdict = r.deficit < 0 && certified ? Verdict::pass : Verdict::warn;
    rec.note = certified ? "negative deficit stable under grid doubling" : "negative deficit not certified";
    o.records.push_back(rec);
  } catch (const BudgetExhausted& e) {
    Record rec = record_from(e.best, c.label + " search", "counterexample");
    rec.verdict = Verdict::warn;
    rec.note = std::string("budget exhausted: ") + e.what();
    o.records.push_back(rec);
    o.warnings.push_back(c.label + ": search budget exhausted without a certified negative deficit");
  }
  return o;
}

}  // namespace

GammaRange parse_gamma_range(const std::string& text) {
  GammaRange r;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &r.lo, &r.hi, &r.count, &tail) != 3)
    throw ConfigError("gamma range must be lo:hi:count, got '" + text + "'");
  return r;
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> e;
  if (!n.empty()) e.push_back({"n", join(n)});
  if (!gamma.empty()) e.push_back({"gamma", join(gamma)});
  if (gamma_range)
    e.push_back({"gamma-range", decimal(gamma_range->lo) + ":" + decimal(gamma_range->hi) + ":" +
                                    std::to_string(gamma_range->count)});
  if (!lambda.empty()) e.push_back({"lambda", join(lambda)});
  e.push_back({"grid", std::to_string(grid)});
  e.push_back({"modes", std::to_string(modes)});
  e.push_back({"jet-order", std::to_string(jet_order)});
  e.push_back({"tol", decimal(tol)});
  e.push_back({"seed", std::to_string(seed)});
  e.push_back({"samples", std::to_string(samples)});
  e.push_back({"budget", std::to_string(budget)});
  return e;
}

void validate(const RunConfig& cfg) {
  for (int n : cfg.n)
    if (n < 1 || n > 16) throw ConfigError("n must be in 1..16");
  for (double g : cfg.gamma)
    if (!(g > 0.0)) throw ConfigError("gamma must be positive");
  if (cfg.gamma_range) {
    const auto& r = *cfg.gamma_range;
    if (!(r.lo > 0.0) || !(r.hi >= r.lo) || r.count < 1) throw ConfigError("gamma range needs 0 < lo <= hi, count >= 1");
  }
  for (double l : cfg.lambda)
    if (!(l > 0.0)) throw ConfigError("lambda must be positive");
  if (cfg.grid < 0 || cfg.modes < 0 || cfg.jet_order < 0 || cfg.samples < 0 || cfg.budget < 0)
    throw ConfigError("grid, modes, jet-order, samples and budget must be positive");
  if (!(cfg.tol >= 0.0)) throw ConfigError("tol must be positive");
  if (cfg.parallel < 1) throw ConfigError("parallel must be at least 1");
  if (cfg.format != "json" && cfg.format != "csv") throw ConfigError("format must be json or csv");
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"funk-hecke", "sobolev",    "reverse-sobolev", "beckner",
                                                 "reverse-hls", "duality",   "stability",       "scattering",
                                                 "boundary",    "counterexample"};
  return names;
}

std::string command_summary(const std::string& name) {
  static const std::map<std::string, std::string> s = {
      {"funk-hecke", "quadrature vs closed-form eigenvalues of the power kernel"},
      {"sobolev", "sharp Sobolev inequality for gamma < n/2"},
      {"reverse-sobolev", "reverse Sobolev inequality for gamma > n/2"},
      {"beckner", "Onofri-Beckner inequality"},
      {"reverse-hls", "reverse Hardy-Littlewood-Sobolev inequality"},
      {"duality", "duality inequality for gamma in (n/2, n/2+1)"},
      {"stability", "stability lower bound for gamma in (n/2+1, n/2+2)"},
      {"scattering", "Poisson problem, scattering multipliers and extension jets"},
      {"boundary", "boundary operators, coefficients, energy and trace inequalities"},
      {"counterexample", "negative-deficit search for gamma > n/2+2"},
  };
  auto it = s.find(name);
  return it == s.end() ? std::string() : it->second;
}

Report cmd_funk_hecke(const RunConfig& cfg) {
  Report rep;
  const int L = modes_or(cfg, 20);
  const double tol = tol_or(cfg, 1e-9);
  auto cells = gamma_cells(
      cfg, n_or(cfg, {2, 3, 4}), [](int) { return std::vector<double>{0.4, 0.7, 1.3, 2.2, 2.6}; },
      [](const SphereGeometry&, double g) {
        if (!(g > 0.0)) throw UnsupportedGamma("funk-hecke needs gamma > 0");
      },
      rep);
  std::string rows = "n,gamma,l,quadrature,closed_form,relative\n";
  merge(rep, run_cells(cells, cfg.parallel, [&](const Cell& c, size_t) { return funk_hecke_cell(cfg, c, L, tol); }),
        nullptr, &rows);
  rep.files["funk_hecke_lambda.csv"] = rows;
  return rep;
}

Report cmd_sobolev(const RunConfig& cfg) { return sobolev_suite(cfg, false); }
Report cmd_reverse_sobolev(const RunConfig& cfg) { return sobolev_suite(cfg, true); }

Report cmd_beckner(const RunConfig& cfg) {
  Report rep;
  if (!cfg.gamma.empty() || cfg.gamma_range) rep.warnings.push_back("beckner fixes gamma = n/2; --gamma ignored");
  std::vector<Cell> cells;
  for (int n : n_or(cfg, {1, 2, 3})) cells.push_back({n, 0.5 * n, "n=" + std::to_string(n)});
  Plot plot{"beckner_deficit", "Onofri-Beckner deficit of eps * B_1", "eps", "deficit", {}};
  merge(rep, run_cells(cells, cfg.parallel, [&](const Cell& c, size_t i) { return beckner_cell(cfg, c, i); }), &plot);
  rep.plots.push_back(plot);
  return rep;
}

Report cmd_reverse_hls(const RunConfig& cfg) {
  Report rep;
  if (!cfg.gamma.empty() || cfg.gamma_range) rep.warnings.push_back("reverse-hls is parameterized by --lambda; --gamma ignored");
  std::vector<double> lambdas = cfg.lambda.empty() ? std::vector<double>{0.5, 1.0, 2.0} : cfg.lambda;
  std::vector<Cell> cells;
  for (int n : n_or(cfg, {1, 2, 3}))
    for (double l : lambdas) cells.push_back({n, l, cell_label(n, l, "lambda")});
  merge(rep, run_cells(cells, cfg.parallel, [&](const Cell& c, size_t i) { return hls_cell(cfg, c, i); }));
  return rep;
}

Report cmd_duality(const RunConfig& cfg) {
  Report rep;
  auto cells = gamma_cells(
      cfg, n_or(cfg, {1, 2, 3}), [](int n) { return std::vector<double>{0.5 * n + 0.3, 0.5 * n + 0.7}; },
      [](const SphereGeometry& geo, double g) {
        if (!(g > 0.5 * geo.n && g < 0.5 * geo.n + 1)) throw UnsupportedGamma("duality needs gamma in (n/2, n/2 + 1)");
      },
      rep);
  merge(rep, run_cells(cells, cfg.parallel, [&](const Cell& c, size_t i) { return duality_cell(cfg, c, i); }));
  return rep;
}

Report cmd_stability(const RunConfig& cfg) {
  Report rep;
  auto cells = gamma_cells(
      cfg, n_or(cfg, {1}),
      [](int n) {
        double h = 0.5 * n;
        return std::vector<double>{h + 1.1, h + 1.3, h + 1.7, h + 1.9};
      },
      [](const SphereGeometry& geo, double g) {
        check_sobolev_gamma(geo, g);
        if (!(g > 0.5 * geo.n + 1 && g < 0.5 * geo.n + 2))
          throw UnsupportedGamma("stability needs gamma in (n/2 + 1, n/2 + 2)");
      },
      rep);
  Plot plot{"stability_sweep", "deficit and lower bound under a degree-2 perturbation", "amplitude", "value", {}};
  merge(rep, run_cells(cells, cfg.parallel, [&](const Cell& c, size_t i) { return stability_cell(cfg, c, i); }), &plot);
  rep.plots.push_back(plot);
  return rep;
}

Report cmd_scattering(const RunConfig& cfg) {
  Report rep;
  auto cells = gamma_cells(
      cfg, n_or(cfg, {1, 2, 3}), [](int) { return std::vector<double>{0.4, 1.3, 2.6}; },
      [](const SphereGeometry&, double g) {
        if (is_integer(g)) throw UnsupportedGamma("scattering needs non-integer gamma");
      },
      rep);
  merge(rep, run_cells(cells, cfg.parallel, [&](const Cell& c, size_t i) { return scattering_cell(cfg, c, i); }));
  return rep;
}

Report cmd_boundary(const RunConfig& cfg) {
  Report rep;
  auto ns = n_or(cfg, {1, 2, 3});
  auto cells = gamma_cells(
      cfg, ns, [](int) { return std::vector<double>{0.5, 1.3, 2.6, 3.4}; },
      [](const SphereGeometry&, double g) {
        if (is_integer(g)) throw UnsupportedGamma("boundary operators need non-integer gamma");
      },
      rep);
  merge(rep, run_cells(cells, cfg.parallel, [&](const Cell& c, size_t i) { return boundary_cell(cfg, c, i); }));
  boundary_globals(cfg, ns, rep);

  std::vector<double> gs;
  for (const auto& c : cells)
    if (std::find(gs.begin(), gs.end(), c.value) == gs.end()) gs.push_back(c.value);
  std::string table, json = "{\"coefficients\":[";
  for (size_t k = 0; k < gs.size(); ++k) {
    BoundaryCoefficients bc = boundary_coeffs(gs[k]);
    table += coefficient_table(bc) + "\n";
    json += (k ? "," : "") + coefficients_json(bc);
    for (const auto& [g, v] : bc.c_gammas) rep.constant("c_gamma[gamma=" + fmt(g) + "]", v);
  }
  rep.tables = json + "]}";
  rep.files["boundary_coefficients.txt"] = table;
  return rep;
}

Report cmd_counterexample(const RunConfig& cfg) {
  Report rep;
  auto cells = gamma_cells(
      cfg, n_or(cfg, {1}), [](int n) { return std::vector<double>{n == 1 ? 2.7 : 0.5 * n + 2.2}; },
      [](const SphereGeometry& geo, double g) {
        if (!(g > 0.5 * geo.n + 2) || is_integer(g - 0.5 * geo.n))
          throw UnsupportedGamma("counterexample search needs gamma > n/2 + 2 with gamma - n/2 not an integer");
      },
      rep);
  merge(rep, run_cells(cells, cfg.parallel, [&](const Cell& c, size_t i) { return counterexample_cell(cfg, c, i); }));
  return rep;
}

Report run_command(const std::string& name, const RunConfig& cfg) {
  static const std::map<std::string, Report (*)(const RunConfig&)> table = {
      {"funk-hecke", cmd_funk_hecke}, {"sobolev", cmd_sobolev},       {"reverse-sobolev", cmd_reverse_sobolev},
      {"beckner", cmd_beckner},       {"reverse-hls", cmd_reverse_hls}, {"duality", cmd_duality},
      {"stability", cmd_stability},   {"scattering", cmd_scattering}, {"boundary", cmd_boundary},
      {"counterexample", cmd_counterexample},
  };
  auto it = table.find(name);
  if (it == table.end()) throw ConfigError("unknown command '" + name + "'");
  validate(cfg);
  auto t0 = std::chrono::steady_clock::now();
  Report r = it->second(cfg);
  r.command = name;
  r.config = cfg.entries();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

int exit_code(const Report& r) { return r.verdict() == Verdict::fail ? 2 : 0; }

void write_outputs(const Report& r, const RunConfig& cfg) {
  namespace fs = std::filesystem;
  fs::path dir(cfg.out);
  fs::create_directories(dir);
  auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream os(dir / name);
    if (!os) throw Error("cannot write " + (dir / name).string());
    os << text;
  };
  if (cfg.format == "json") {
    put(r.command + "_report.json", to_json(r) + "\n");
  } else {
    std::ostringstream os;
    write_records_csv(os, r);
    put(r.command + "_report.csv", os.str());
  }
  for (const auto& p : r.plots) {
    std::ostringstream c, s;
    write_plot_csv(c, p);
    write_plot_svg(s, p);
    put(p.file + ".csv", c.str());
    put(p.file + ".svg", s.str());
  }
  for (const auto& [name, text] : r.files) put(name, text);
}

}  // namespace gjmslab::cli
