#pragma once

#include "gjmslab/zonal.hpp"

namespace gjmslab {

// Moebius map of S^n along the north-pole axis, parameter a in (-1, 1).
struct ConformalMap {
  SphereGeometry geometry;
  double a = 0.0;

  ConformalMap() = default;
  ConformalMap(const SphereGeometry& geo, double param);

  double factor(double t) const;      // J_a(t); det d(phi) = J_a^n
  double transport(double t) const;   // latitude of phi(xi)
  ConformalMap inverse() const { return ConformalMap(geometry, -a); }
};

double conformal_factor(const ConformalMap& map, double t);
double conformal_factor(double a, double t);
double transported_latitude(double a, double t);
// parameter of phi_b o phi_a
double compose(double a, double b);

// f_phi(t) = f(phi(t)) J_a(t)^{n beta}, re-analyzed on an oversampled grid.
AnalysisReport pushforward_with_report(const ZonalFunction& f, const ConformalMap& map, double beta, int L_out = -1);
ZonalFunction pushforward(const ZonalFunction& f, const ConformalMap& map, double beta, int L_out = -1);
ZonalFunction pushforward(const ZonalFunction& f, double a, double beta, int L_out = -1);

// Sobolev weight (n - 2 gamma) / (2n).
double sobolev_weight(const SphereGeometry& geo, double gamma);

// m = integral of f(xi) (xi . e) dV; the only nonzero component for zonal f.
double center_of_mass(const ZonalFunction& f, double gamma);

struct NormalizationResult {
  double a_star = 0.0;
  ZonalFunction f_norm;
  double residual = 0.0;  // center of mass of f_norm
  int sign_changes = 0;   // number of sign changes of m(a) seen on the scan
  std::string note;
};

NormalizationResult normalize_center_of_mass(const ZonalFunction& f, double gamma, int L_out = -1);

}  // namespace gjmslab
