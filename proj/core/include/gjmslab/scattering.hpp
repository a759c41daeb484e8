#pragma once

#include <iosfwd>
#include <vector>

#include "gjmslab/jet.hpp"
#include "gjmslab/zonal.hpp"

namespace gjmslab {

struct BallPoint {
  double r = 0.0;  // |x|
  double t = 1.0;  // latitude of x/|x|

  double rho() const { return 2.0 * (1.0 - r) / (1.0 + r); }
  double rho0() const { return 0.5 * (1.0 - r * r); }
  static BallPoint from_rho(double rho, double t) { return {(2.0 - rho) / (2.0 + rho), t}; }
};

struct PoissonSolution {
  SphereGeometry geometry;
  double gamma = 0.5;
  double s = 0.0;
  ZonalFunction f;

  PoissonSolution(const ZonalFunction& boundary, double gamma);
};

struct PoissonValue {
  double value = 0.0;
  double error_estimate = 0.0;
  bool near_boundary = false;
  int terms = 0;
  double tail = 0.0;
};

// pi^{-n/2} 2^{-s} Gamma(n/2+gamma)/Gamma(gamma)
double poisson_prefactor(const SphereGeometry& geo, double gamma);
PoissonValue poisson_eval_integral_with_report(const PoissonSolution& sol, const BallPoint& p);
double poisson_eval_integral(const PoissonSolution& sol, const BallPoint& p);
PoissonValue poisson_eval_series_with_report(const PoissonSolution& sol, const BallPoint& p);
double poisson_eval_series(const PoissonSolution& sol, const BallPoint& p);

// Radial factor of mode l, normalized so that phi_l(1) = 1.
double phi_l(const SphereGeometry& geo, double gamma, int l, double z);
// u(0) for f = 1 from the kernel and from the series.
double poisson_origin_integral_form(const SphereGeometry& geo, double gamma);
double poisson_origin_series_form(const SphereGeometry& geo, double gamma);

// c_gamma = 2^{2 gamma} Gamma(gamma) / Gamma(-gamma)
double c_gamma(double gamma);
double c_gamma_inverse(double gamma);
double scattering_multiplier(const SphereGeometry& geo, double gamma, int l);
ZonalFunction scattering_apply(const ZonalFunction& f, double gamma);

// Expansion of the extension of f with parameter gamma':
//   sum_m first[m] rho^{n/2 - g' + 2m} + sum_m second[m] rho^{n/2 + g' + 2m}.
struct ExtensionSeries {
  double exp1 = 0.0;
  double exp2 = 0.0;
  std::vector<ZonalFunction> first;
  std::vector<ZonalFunction> second;
};
ExtensionSeries extension_series(const ZonalFunction& f, double gamma_prime, int order);
// Scalar coefficient lists for a single mode.
void extension_mode_coeffs(const SphereGeometry& geo, int l, double gamma_prime, int order, std::vector<double>& first,
                           std::vector<double>& second);
RhoJet extension_jet(const SphereGeometry& geo, int l, double gamma_prime, int order);
RhoJet extension_jet(const ZonalFunction& f, double gamma_prime, int order);

// |(-Delta_+ - s(n-s)) u| / |u| by a fourth-order stencil of width h in (r, t).
double pde_residual(const PoissonSolution& sol, const BallPoint& p, double h = 2e-3);
// Residual of the hypergeometric equation satisfied by the mode-l radial factor at z.
double mode_ode_residual(const SphereGeometry& geo, double gamma, int l, double z, double h = 1e-3);

void write_solution_csv(std::ostream& os, const PoissonSolution& sol, const std::vector<double>& r,
                        const std::vector<double>& t);

}  // namespace gjmslab
