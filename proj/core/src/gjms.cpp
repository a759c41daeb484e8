#include "gjmslab/gjms.hpp"

#include <cmath>

#include "gjmslab/errors.hpp"

namespace gjmslab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double gjms_multiplier(const SphereGeometry& geo, double gamma, int l) {
  double h = 0.5 * geo.n + l;
  return gamma_ratio(h + gamma, h - gamma).to_real();
}

OperatorSpectrum gjms_spectrum(const SphereGeometry& geo, double gamma, int L) {
  if (!(gamma > 0.0)) throw DomainError("gjms_spectrum needs gamma > 0");
  OperatorSpectrum s;
  s.geometry = geo;
  s.gamma = gamma;
  s.multipliers.resize(L + 1);
  for (int l = 0; l <= L; ++l) s.multipliers[l] = gjms_multiplier(geo, gamma, l);
  return s;
}

ZonalFunction apply_spectrum(const OperatorSpectrum& spec, const ZonalFunction& f) {
  if (!(spec.geometry == f.geometry)) throw GridMismatch("spectrum and function live on different spheres");
  if (f.L() > spec.L()) throw GridMismatch("spectrum shorter than the function");
  ZonalFunction g = f;
  for (int l = 0; l <= f.L(); ++l) g.coeffs[l] *= spec.multipliers[l];
  return g;
}

ZonalFunction divide_spectrum(const OperatorSpectrum& spec, const ZonalFunction& f) {
  if (!(spec.geometry == f.geometry)) throw GridMismatch("spectrum and function live on different spheres");
  if (f.L() > spec.L()) throw GridMismatch("spectrum shorter than the function");
  ZonalFunction g = f;
  for (int l = 0; l <= f.L(); ++l) {
    double m = spec.multipliers[l];
    g.coeffs[l] = m != 0.0 ? g.coeffs[l] / m : 0.0;
  }
  return g;
}

bool is_kernel_pole(const SphereGeometry& geo, double gamma) {
  return is_nonpositive_integer(0.5 * geo.n - gamma);
}

double funk_hecke_eigenvalue(const std::function<double(double)>& K, int l, const SphereGeometry& geo, int M,
                             double sigma) {
  double beta = 0.5 * (geo.n - 2);
  double alpha = sigma + beta;
  if (!(alpha > -1.0)) throw KernelSingularity("kernel singularity at t = 1 is not integrable");
  auto rule = gauss_jacobi_rule(alpha, beta, M);
  double s = 0.0;
  for (int i = 0; i < M; ++i) s += rule->weights[i] * K(rule->nodes[i]) * basis_eval(geo, l, rule->nodes[i]);
  return geo.boundary_volume / basis_eval(geo, l, 1.0) * s;
}

double funk_hecke_power_kernel(const SphereGeometry& geo, double gamma, int l, int M) {
  if (!(gamma > 0.0)) throw KernelSingularity("power kernel needs gamma > 0");
  double sigma = gamma - 0.5 * geo.n;
  double c = std::pow(2.0, sigma);
  return funk_hecke_eigenvalue([c](double) { return c; }, l, geo, M, sigma);
}

double funk_hecke_power_closed_form(const SphereGeometry& geo, double gamma, int l) {
  double h = 0.5 * geo.n;
  SignedLogValue poch;
  if (is_nonpositive_integer(h - gamma)) {
    poch = SignedLogValue::from_real(pochhammer(h - gamma, l));
  } else {
    poch = gamma_ratio(l + h - gamma, h - gamma);
  }
  SignedLogValue pre = SignedLogValue::from_real(std::pow(2.0, 2 * gamma) * std::pow(kPi, h)) * gamma_signed(gamma);
  return (pre * poch * reciprocal_gamma(l + h + gamma)).to_real();
}

ZonalFunction inverse_kernel_apply(const ZonalFunction& f, double gamma, int M) {
  const SphereGeometry& geo = f.geometry;
  if (!(gamma > 0.0)) throw KernelSingularity("kernel |xi-eta|^{2g-n} needs g > 0");
  if (is_kernel_pole(geo, gamma)) throw PoleError("inverse kernel prefactor has a pole at gamma - n/2 in N_0");
  if (M <= 0) M = std::max(f.L() + 2, 32);
  double h = 0.5 * geo.n;
  double pre = (gamma_signed(h - gamma) / (SignedLogValue::from_real(std::pow(2.0, 2 * gamma) * std::pow(kPi, h)) *
                                           gamma_signed(gamma)))
                   .to_real();
  ZonalFunction g = f;
  for (int l = 0; l <= f.L(); ++l) g.coeffs[l] *= pre * funk_hecke_power_kernel(geo, gamma, l, M);
  return g;
}

double conformal_energy(const ZonalFunction& f, double gamma) { return energy_form(f, f, gamma); }

double energy_form(const ZonalFunction& f, const ZonalFunction& g, double gamma) {
  if (!(f.geometry == g.geometry)) throw GridMismatch("functions on different spheres");
  int L = std::min(f.L(), g.L());
  double s = 0.0;
  for (int l = 0; l <= L; ++l)
    s += gjms_multiplier(f.geometry, gamma, l) * f.coeffs[l] * g.coeffs[l] * mode_norm(f.geometry, l);
  return s;
}

}  // namespace gjmslab
