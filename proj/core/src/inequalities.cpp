#include "gjmslab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace gjmslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool near(double a, double b) { return std::fabs(a - b) < 1e-12 * std::max(1.0, std::fabs(b)); }

bool is_integer(double x) { return near(x, std::round(x)); }

// (integral of |F|^p)^{1/p}; negative or fractional p with a nonpositive sample throws unless use_abs
double norm_on_grid(const ZonalFunction& f, double p, int M, bool use_abs) {
  ZonalGrid g = make_grid(f.geometry, M);
  auto v = synthesize(f, g);
  if (use_abs) {
    if (p < 0.0) throw DomainError("absolute-value norm needs p > 0");
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) s += g.w[i] * std::pow(std::fabs(v[i]), p);
    return std::pow(s, 1.0 / p);
  }
  return lp_norm(v, g, f.geometry, p);
}

DeficitReport raw_sobolev(const ZonalFunction& f, double gamma, int M, const char* name) {
  const SphereGeometry& geo = f.geometry;
  if (M <= 0) M = default_grid_size(geo);
  const double p = sobolev_exponent(geo, gamma);
  const bool reverse = gamma > 0.5 * geo.n;
  const double C = sobolev_constant(geo, gamma);
  double lhs = conformal_energy(f, gamma);
  double nc = norm_on_grid(f, p, M, !reverse);
  double nf = norm_on_grid(f, p, 2 * M, !reverse);
  DeficitReport r = make_report(name, lhs, C * nf * nf);
  r.n = geo.n;
  r.gamma = gamma;
  r.grid = M;
  r.modes = f.L();
  r.has_refinement = true;
  r.refinement_coarse = lhs - C * nc * nc;
  r.refinement_fine = r.deficit;
  r.extras["exponent"] = p;
  r.extras["constant"] = C;
  r.extras["m0"] = gjms_multiplier(geo, gamma, 0);
  return r;
}

}  // namespace

DeficitReport make_report(std::string name, double lhs, double rhs) {
  DeficitReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.deficit = lhs - rhs;
  r.relative = r.deficit / std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
  return r;
}

double sobolev_constant(const SphereGeometry& geo, double gamma) {
  return gjms_multiplier(geo, gamma, 0) * std::pow(geo.volume, 2.0 * gamma / geo.n);
}

double sobolev_exponent(const SphereGeometry& geo, double gamma) { return 2.0 * geo.n / (geo.n - 2.0 * gamma); }

void check_sobolev_gamma(const SphereGeometry& geo, double gamma) {
  const double h = 0.5 * geo.n;
  std::ostringstream os;
  os << "gamma = " << gamma << " on S^" << geo.n << ": ";
  if (!(gamma > 0.0)) throw UnsupportedGamma(os.str() + "needs gamma > 0");
  if (near(gamma, h)) throw UnsupportedGamma(os.str() + "gamma = n/2 is the Onofri-Beckner case");
  if (gamma < h) return;
  if (is_integer(gamma)) throw UnsupportedGamma(os.str() + "integer gamma above n/2 is excluded");
  if (near(gamma, h + 1.0)) throw UnsupportedGamma(os.str() + "gamma = n/2 + 1 is excluded");
  if (gamma > h + 2.0 - 1e-12)
    throw UnsupportedGamma(os.str() + "reverse inequality fails above n/2 + 2; use the counterexample search");
}

DeficitReport sobolev_deficit(const ZonalFunction& f, double gamma, int M) {
  check_sobolev_gamma(f.geometry, gamma);
  return raw_sobolev(f, gamma, M, gamma < 0.5 * f.geometry.n ? "sobolev" : "reverse_sobolev");
}

AnalysisReport extremal_profile_with_report(double a, double gamma, const SphereGeometry& geo, int L) {
  if (!(a > -1.0 && a < 1.0)) throw DomainError("extremal parameter must lie in (-1, 1)");
  const double e = 0.5 * (geo.n - 2.0 * gamma);
  return project_with_report([&](double t) { return std::pow(conformal_factor(a, t), e); }, geo, L,
                             std::max(default_grid_size(geo), 2 * L + 2));
}

ZonalFunction extremal_profile(double a, double gamma, const SphereGeometry& geo, int L) {
  if (a == 0.0) return ZonalFunction::constant(geo, 1.0, L);
  return extremal_profile_with_report(a, gamma, geo, L).f;
}

DeficitReport beckner_deficit(const ZonalFunction& f, int M) {
  const SphereGeometry& geo = f.geometry;
  const int n = geo.n;
  if (M <= 0) M = default_grid_size(geo);
  double fact = std::tgamma(n + 1.0);
  double energy = 0.0;
  for (int l = 1; l <= f.L(); ++l) energy += pochhammer(l, n) * f.mode_l2(l);
  double lhs = energy / (2.0 * fact * geo.volume);
  const double mean = f.mean();
  double rhs_at[2];
  for (int k = 0; k < 2; ++k) {
    ZonalGrid g = make_grid(geo, k == 0 ? M : 2 * M);
    auto v = synthesize(f, g);
    double mx = -1e300;
    for (double& x : v) {
      x -= mean;
      mx = std::max(mx, x);
    }
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) s += g.w[i] * std::exp(v[i] - mx);
    rhs_at[k] = mx + std::log(s / geo.volume);
  }
  DeficitReport r = make_report("beckner", lhs, rhs_at[1]);
  r.n = n;
  r.gamma = 0.5 * n;
  r.grid = M;
  r.modes = f.L();
  r.has_refinement = true;
  r.refinement_coarse = lhs - rhs_at[0];
  r.refinement_fine = r.deficit;
  return r;
}

double reverse_hls_constant(const SphereGeometry& geo, double lambda) {
  const double n = geo.n;
  double g = std::tgamma(0.5 * (n + lambda)) / std::tgamma(n + 0.5 * lambda);
  double base = std::tgamma(n) / std::tgamma(0.5 * n);
  return std::pow(kPi, -0.5 * lambda) * g * std::pow(base, 1.0 + lambda / n);
}

double hls_double_integral(const ZonalFunction& f, const ZonalFunction& g, double lambda) {
  if (!(f.geometry == g.geometry)) throw GridMismatch("functions on different spheres");
  if (!(lambda > 0.0)) throw DomainError("reverse HLS needs lambda > 0");
  const SphereGeometry& geo = f.geometry;
  int L = std::min(f.L(), g.L());
  int M = L / 2 + 4;
  double kg = 0.5 * (geo.n + lambda);
  double s = 0.0;
  for (int l = 0; l <= L; ++l)
    s += funk_hecke_power_kernel(geo, kg, l, M) * f.coeffs[l] * g.coeffs[l] * mode_norm(geo, l);
  return s;
}

DeficitReport reverse_hls_ratio(const ZonalFunction& f, const ZonalFunction& g, double lambda, int M) {
  const SphereGeometry& geo = f.geometry;
  if (M <= 0) M = default_grid_size(geo);
  const double q = 2.0 * geo.n / (2.0 * geo.n + lambda);
  double lhs = hls_double_integral(f, g, lambda);
  double C = reverse_hls_constant(geo, lambda);
  double rc = C * norm_on_grid(f, q, M, false) * norm_on_grid(g, q, M, false);
  double rf = C * norm_on_grid(f, q, 2 * M, false) * norm_on_grid(g, q, 2 * M, false);
  DeficitReport r = make_report("reverse_hls", lhs, rf);
  r.n = geo.n;
  r.gamma = 0.5 * (geo.n + lambda);
  r.grid = M;
  r.modes = std::min(f.L(), g.L());
  r.has_refinement = true;
  r.refinement_coarse = lhs - rc;
  r.refinement_fine = r.deficit;
  r.extras["lambda"] = lambda;
  r.extras["ratio"] = lhs / rf;
  r.extras["constant"] = C;
  return r;
}

DualityTerms duality_terms(const ZonalFunction& f, const ZonalFunction& g, double gamma) {
  if (!(f.geometry == g.geometry)) throw GridMismatch("functions on different spheres");
  const SphereGeometry& geo = f.geometry;
  DualityTerms d;
  double m0 = gjms_multiplier(geo, gamma, 0);
  d.a_f = -m0 * f.mode_l2(0);
  d.b_g = -g.mode_l2(0) / m0;
  for (int l = 1; l <= f.L(); ++l) d.a_sq += gjms_multiplier(geo, gamma, l) * f.mode_l2(l);
  for (int l = 1; l <= g.L(); ++l) d.b_sq += g.mode_l2(l) / gjms_multiplier(geo, gamma, l);
  for (int l = 0; l <= std::min(f.L(), g.L()); ++l) d.mixed += f.coeffs[l] * g.coeffs[l] * mode_norm(geo, l);
  double ra = std::sqrt(d.a_sq), rb = std::sqrt(d.b_sq);
  double x = std::sqrt(d.a_f * d.b_g) - ra * rb;
  d.decomposition_lhs = (d.a_f - d.a_sq) * (d.b_g - d.b_sq) - x * x;
  double y = ra * std::sqrt(d.b_g) - rb * std::sqrt(d.a_f);
  d.decomposition_rhs = -y * y;
  return d;
}

DeficitReport duality_gap(const ZonalFunction& f, const ZonalFunction& g, double gamma) {
  const SphereGeometry& geo = f.geometry;
  const double h = 0.5 * geo.n;
  if (!(gamma > h && gamma < h + 1.0) || is_integer(gamma))
    throw UnsupportedGamma("duality inequality needs gamma in (n/2, n/2 + 1)");
  if (grid_min(f) <= 0.0 || grid_min(g) <= 0.0) throw NonPositiveValue("duality inequality needs positive f and g");
  DualityTerms d = duality_terms(f, g, gamma);
  DeficitReport r = make_report("duality", d.mixed * d.mixed, (d.a_f - d.a_sq) * (d.b_g - d.b_sq));
  r.n = geo.n;
  r.gamma = gamma;
  r.modes = std::min(f.L(), g.L());
  r.extras["a_f"] = d.a_f;
  r.extras["a_sq"] = d.a_sq;
  r.extras["b_g"] = d.b_g;
  r.extras["b_sq"] = d.b_sq;
  r.extras["mixed"] = d.mixed;
  r.extras["decomposition_residual"] = d.decomposition_lhs - d.decomposition_rhs;
  // kernel route for the P^{-1} quadratic form
  if (!is_kernel_pole(geo, gamma)) {
    ZonalFunction k = inverse_kernel_apply(g, gamma);
    double s = 0.0;
    for (int l = 0; l <= g.L(); ++l) s -= k.coeffs[l] * g.coeffs[l] * mode_norm(geo, l);
    r.extras["inverse_form_kernel"] = s;
    r.extras["inverse_form_spectral"] = d.b_g - d.b_sq;
  }
  return r;
}

StabilityReport stability_bound(const ZonalFunction& f, double gamma, int M) {
  const SphereGeometry& geo = f.geometry;
  const double h = 0.5 * geo.n;
  if (!(gamma > h + 1.0 && gamma < h + 2.0) || is_integer(gamma))
    throw UnsupportedGamma("stability bound needs gamma in (n/2 + 1, n/2 + 2)");
  StabilityReport s;
  s.sobolev = sobolev_deficit(f, gamma, M);
  s.deficit = s.sobolev.deficit;
  NormalizationResult nr = normalize_center_of_mass(f, gamma);
  s.a_star = nr.a_star;
  s.f_phi = nr.f_norm;
  s.c = nr.f_norm.mean();
  s.residual_mode1 = nr.residual;
  double lb = 0.0;
  for (int l = 1; l <= s.f_phi.L(); ++l) lb += gjms_multiplier(geo, gamma, l) * s.f_phi.mode_l2(l);
  s.lower_bound = lb;
  ZonalFunction back = f.truncated(s.f_phi.L()) - s.c * extremal_profile(-s.a_star, gamma, geo, s.f_phi.L());
  s.lower_bound_pushforward = conformal_energy(back, gamma);
  return s;
}

DeficitReport counterexample_search(double gamma, const SphereGeometry& geo, const SearchOptions& opts) {
  const double h = 0.5 * geo.n;
  if (!(gamma > h + 2.0) || is_integer(gamma - h))
    throw UnsupportedGamma("counterexample search needs gamma > n/2 + 2 with gamma - n/2 not an integer");
  const int L = std::max(opts.modes, 2);
  const int M = opts.grid > 0 ? opts.grid : default_grid_size(geo);
  ZonalFunction one = ZonalFunction::constant(geo, 1.0, L);
  one *= 1.0 / std::sqrt(one.l2_squared());
  DeficitReport best = raw_sobolev(one, gamma, M, "counterexample");
  ZonalFunction best_f = one;
  int evals = 0;
  if (opts.budget <= 0) throw BudgetExhausted("search budget is zero", best);

  auto evaluate = [&](ZonalFunction cand) -> bool {
    // shrink the perturbation until the candidate stays above 1e-6 max
    for (int k = 0; k < 40; ++k) {
      ZonalGrid g = make_grid(geo, std::max(4 * L + 16, 64));
      auto v = synthesize(cand, g);
      double mn = std::min(cand(1.0), cand(-1.0)), mx = std::max(cand(1.0), cand(-1.0));
      for (double x : v) {
        mn = std::min(mn, x);
        mx = std::max(mx, x);
      }
      if (mn > 1e-6 * mx) break;
      for (int l = 1; l <= L; ++l) cand.coeffs[l] *= 0.5;
    }
    cand *= 1.0 / std::sqrt(cand.l2_squared());
    ++evals;
    DeficitReport r;
    try {
      r = raw_sobolev(cand, gamma, M, "counterexample");
    } catch (const NonPositiveValue&) {
      return false;
    }
    if (r.deficit < best.deficit) {
      best = r;
      best_f = cand;
      return true;
    }
    return false;
  };

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const double amps[] = {0.3, 0.1, 0.03};
  int restarts = std::max(1, opts.budget / 4);
  for (int r = 0; r < restarts && evals < opts.budget; ++r) {
    ZonalFunction cand = ZonalFunction::constant(geo, 1.0, L);
    double amp = amps[r % 3];
    for (int l = 2; l <= L; ++l) cand.coeffs[l] = amp * nd(rng) / std::pow(1.0 + l, 2.0) / std::sqrt(mode_norm(geo, l) / geo.volume);
    evaluate(cand);
  }
  double step = 0.05;
  while (evals < opts.budget && step > 1e-6) {
    bool improved = false;
    for (int l = 1; l <= L && evals < opts.budget; ++l) {
      for (double sgn : {1.0, -1.0}) {
        ZonalFunction cand = best_f;
        cand.coeffs[l] += sgn * step * best_f.coeffs[0] / std::sqrt(mode_norm(geo, l) / geo.volume);
        if (evaluate(cand)) {
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  best.name = "counterexample";
  best.extras["evaluations"] = evals;
  bool stable = best.refinement_coarse < 0.0 && best.refinement_fine < 0.0 &&
                std::fabs(best.refinement_coarse - best.refinement_fine) < 0.01 * std::fabs(best.refinement_fine);
  best.extras["certified"] = stable ? 1.0 : 0.0;
  for (int l = 0; l <= best_f.L(); ++l) best.extras["coeff_" + std::to_string(l)] = best_f.coeffs[l];
  if (!stable) throw BudgetExhausted("no grid-stable negative deficit found within the budget", best);
  return best;
}

DeficitReport nonneg_energy_check(const ZonalFunction& f, double gamma, int M) {
  const SphereGeometry& geo = f.geometry;
  check_sobolev_gamma(geo, gamma);
  if (!(gamma > 0.5 * geo.n)) throw UnsupportedGamma("nonnegative energy check is for the reverse range");
  if (M <= 0) M = default_grid_size(geo);
  double mn = grid_min(f, std::max(4 * f.L() + 64, 256));
  double scale = std::max(1.0, std::fabs(f.coeffs.empty() ? 0.0 : f(1.0)));
  for (double t = -1.0; t <= 1.0; t += 1.0 / 64) scale = std::max(scale, std::fabs(f(t)));
  if (std::fabs(mn) > 1e-12 * scale) throw DomainError("nonneg_energy_check needs min f = 0");
  DeficitReport r = make_report("nonneg_energy", conformal_energy(f, gamma), 0.0);
  r.n = geo.n;
  r.gamma = gamma;
  r.grid = M;
  r.modes = f.L();
  const double p = sobolev_exponent(geo, gamma);
  try {
    r.extras["norm_coarse"] = norm_on_grid(f, p, M, false);
    r.extras["norm_fine"] = norm_on_grid(f, p, 2 * M, false);
  } catch (const NonPositiveValue&) {
    r.extras["norm_fine"] = 0.0;
  }
  return r;
}

}  // namespace gjmslab
