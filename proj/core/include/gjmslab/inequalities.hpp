#pragma once

#include <map>
#include <string>

#include "gjmslab/conformal.hpp"
#include "gjmslab/errors.hpp"
#include "gjmslab/gjms.hpp"

namespace gjmslab {

constexpr double kDefaultTolerance = 1e-8;

struct DeficitReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double deficit = 0.0;
  double relative = 0.0;
  int n = 0;
  double gamma = 0.0;
  int grid = 0;
  int modes = 0;
  bool has_refinement = false;
  double refinement_coarse = 0.0;  // deficit on grid M
  double refinement_fine = 0.0;    // deficit on grid 2M
  std::map<std::string, double> extras;
};

DeficitReport make_report(std::string name, double lhs, double rhs);

struct BudgetExhausted : Error {
  DeficitReport best;
  BudgetExhausted(const std::string& msg, DeficitReport b) : Error(msg), best(std::move(b)) {}
};

// Gamma(n/2 + g) / Gamma(n/2 - g) |S^n|^{2g/n}
double sobolev_constant(const SphereGeometry& geo, double gamma);
// p = 2n / (n - 2 gamma)
double sobolev_exponent(const SphereGeometry& geo, double gamma);
// Throws UnsupportedGamma outside (0, n/2) and the two reverse ranges.
void check_sobolev_gamma(const SphereGeometry& geo, double gamma);

DeficitReport sobolev_deficit(const ZonalFunction& f, double gamma, int M = 0);

// J_a^{(n - 2 gamma)/2}
ZonalFunction extremal_profile(double a, double gamma, const SphereGeometry& geo, int L = kDefaultModes);
AnalysisReport extremal_profile_with_report(double a, double gamma, const SphereGeometry& geo, int L = kDefaultModes);

// (1/(2 n!)) avg(f P_n f) against log avg(exp(f - mean f))
DeficitReport beckner_deficit(const ZonalFunction& f, int M = 0);

double reverse_hls_constant(const SphereGeometry& geo, double lambda);
// double integral of f(xi) g(eta) |xi - eta|^lambda through Funk-Hecke mode sums
double hls_double_integral(const ZonalFunction& f, const ZonalFunction& g, double lambda);
DeficitReport reverse_hls_ratio(const ZonalFunction& f, const ZonalFunction& g, double lambda, int M = 0);

struct DualityTerms {
  double a_f = 0.0, a_sq = 0.0;  // a_f and |a|^2
  double b_g = 0.0, b_sq = 0.0;  // b_g and |b|^2
  double mixed = 0.0;            // integral of f g
  double decomposition_lhs = 0.0;
  double decomposition_rhs = 0.0;
};
DualityTerms duality_terms(const ZonalFunction& f, const ZonalFunction& g, double gamma);
DeficitReport duality_gap(const ZonalFunction& f, const ZonalFunction& g, double gamma);

struct StabilityReport {
  double deficit = 0.0;
  double lower_bound = 0.0;               // energy of f_phi minus its mean
  double lower_bound_pushforward = 0.0;   // energy of f - c (det d phi^{-1})^{(n-2g)/(2n)}
  double a_star = 0.0;
  double c = 0.0;
  double residual_mode1 = 0.0;
  DeficitReport sobolev;
  ZonalFunction f_phi;
};
StabilityReport stability_bound(const ZonalFunction& f, double gamma, int M = 0);

struct SearchOptions {
  int budget = 200;   // deficit evaluations
  int modes = 8;
  unsigned long long seed = 1;
  int grid = 0;
};
// Looks for positive f with negative reverse Sobolev deficit; throws BudgetExhausted on failure.
DeficitReport counterexample_search(double gamma, const SphereGeometry& geo, const SearchOptions& opts = {});

DeficitReport nonneg_energy_check(const ZonalFunction& f, double gamma, int M = 0);

}  // namespace gjmslab
