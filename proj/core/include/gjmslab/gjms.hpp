#pragma once

#include <functional>

#include "gjmslab/zonal.hpp"

namespace gjmslab {

struct OperatorSpectrum {
  SphereGeometry geometry;
  double gamma = 0.0;
  std::vector<double> multipliers;

  int L() const { return static_cast<int>(multipliers.size()) - 1; }
};

// m_l = Gamma(l + n/2 + gamma) / Gamma(l + n/2 - gamma), zero at poles of the denominator.
OperatorSpectrum gjms_spectrum(const SphereGeometry& geo, double gamma, int L);
double gjms_multiplier(const SphereGeometry& geo, double gamma, int l);

ZonalFunction apply_spectrum(const OperatorSpectrum& spec, const ZonalFunction& f);
// divides by m_l on modes with m_l != 0, zero elsewhere
ZonalFunction divide_spectrum(const OperatorSpectrum& spec, const ZonalFunction& f);

// True when gamma - n/2 is a nonnegative integer (inverse kernel prefactor has a pole).
bool is_kernel_pole(const SphereGeometry& geo, double gamma);

// lambda_l = |S^{n-1}| / B_l(1) * int K(t) B_l(t) (1-t^2)^{(n-2)/2} dt, where the kernel is
// (1-t)^sigma * K(t). The factor (1-t)^sigma is absorbed into a Gauss-Jacobi weight of M nodes.
double funk_hecke_eigenvalue(const std::function<double(double)>& K, int l, const SphereGeometry& geo, int M,
                             double sigma = 0.0);
// Eigenvalue of |xi - eta|^{2 gamma - n} = (2-2t)^{gamma - n/2} by quadrature.
double funk_hecke_power_kernel(const SphereGeometry& geo, double gamma, int l, int M);
// Closed form 2^{2g} pi^{n/2} Gamma(g) (n/2 - g)_l / Gamma(l + n/2 + g).
double funk_hecke_power_closed_form(const SphereGeometry& geo, double gamma, int l);

// Integral operator with kernel c |xi - eta|^{2 gamma - n}, c = Gamma(n/2-g)/(2^{2g} pi^{n/2} Gamma(g)).
ZonalFunction inverse_kernel_apply(const ZonalFunction& f, double gamma, int M = 0);

double conformal_energy(const ZonalFunction& f, double gamma);
double energy_form(const ZonalFunction& f, const ZonalFunction& g, double gamma);

}  // namespace gjmslab
