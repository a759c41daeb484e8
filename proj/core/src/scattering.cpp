#include "gjmslab/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "gjmslab/errors.hpp"
#include "gjmslab/gjms.hpp"

namespace gjmslab {

namespace {

const double kPi = boost::math::constants::pi<double>();

bool near_integer(double x, double tol = 1e-12) { return std::abs(x - std::round(x)) < tol; }

// (1 - r^2) / |x - xi|^2 with psi the angle between x/|x| and xi
double kernel_base(double r, double psi) {
  double s2 = std::sin(0.5 * psi);
  return (1.0 - r * r) / ((1.0 - r) * (1.0 - r) + 4.0 * r * s2 * s2);
}

}  // namespace

PoissonSolution::PoissonSolution(const ZonalFunction& boundary, double g)
    : geometry(boundary.geometry), gamma(g), s(0.5 * boundary.geometry.n + g), f(boundary) {
  if (!(g > 0.0)) throw DomainError("Poisson problem needs gamma > 0");
}

double poisson_prefactor(const SphereGeometry& geo, double gamma) {
  double n = geo.n, s = 0.5 * n + gamma;
  return std::pow(kPi, -0.5 * n) * std::pow(2.0, -s) * gamma_ratio_real(0.5 * n + gamma, gamma);
}

PoissonValue poisson_eval_integral_with_report(const PoissonSolution& sol, const BallPoint& p) {
  if (!(p.r >= 0.0 && p.r < 1.0)) throw DomainError("ball point needs 0 <= r < 1");
  const SphereGeometry& geo = sol.geometry;
  const int n = geo.n;
  const double r = p.r, t = std::clamp(p.t, -1.0, 1.0);
  const double st = std::sqrt(std::max(0.0, 1.0 - t * t));
  const ZonalFunction& f = sol.f;

  // Coordinates centered at the direction of x: xi = cos(psi) eta + sin(psi) omega, omega on S^{n-1}.
  std::function<double(double)> G;
  std::shared_ptr<const QuadratureRule> inner;
  if (n == 1) {
    double th = std::acos(t);
    G = [&f, th](double psi) { return f(std::cos(th + psi)) + f(std::cos(th - psi)); };
  } else {
    double a = 0.5 * (n - 3);
    inner = gauss_jacobi_rule(a, a, f.L() / 2 + 2);
    double area = sphere_volume(n - 2);
    G = [&f, t, st, inner, area](double psi) {
      double c = std::cos(psi), s = std::sin(psi), acc = 0.0;
      for (size_t i = 0; i < inner->nodes.size(); ++i) acc += inner->weights[i] * f(t * c + st * s * inner->nodes[i]);
      return area * acc;
    };
  }

  const double sexp = sol.s;
  auto integrand = [&](double psi) {
    double w = n == 1 ? 1.0 : std::pow(std::sin(psi), n - 1);
    return std::pow(kernel_base(r, psi), sexp) * G(psi) * w;
  };

  boost::math::quadrature::tanh_sinh<double> ts(15);
  PoissonValue out;
  double split = std::min(0.5 * kPi, 20.0 * (1.0 - r));
  double e1 = 0.0, e2 = 0.0, l1 = 0.0, l2 = 0.0;
  double v = ts.integrate(integrand, 0.0, split, 1e-14, &e1, &l1) + ts.integrate(integrand, split, kPi, 1e-14, &e2, &l2);
  double c = poisson_prefactor(geo, sol.gamma);
  out.value = c * v;
  out.error_estimate = c * (e1 * l1 + e2 * l2);
  out.near_boundary = r >= 0.99 - 1e-12;
  return out;
}

double poisson_eval_integral(const PoissonSolution& sol, const BallPoint& p) {
  return poisson_eval_integral_with_report(sol, p).value;
}

double phi_l(const SphereGeometry& geo, double gamma, int l, double z) {
  double h = 0.5 * geo.n;
  double pre = gamma_ratio_real(gamma + 0.5, 2.0 * gamma) * gamma_ratio_real(l + gamma + h, l + h + 0.5);
  return pre * hyp2f1(l + h - gamma, 0.5 - gamma, l + h + 0.5, z);
}

PoissonValue poisson_eval_series_with_report(const PoissonSolution& sol, const BallPoint& p) {
  if (!(p.r >= 0.0 && p.r < 1.0)) throw DomainError("ball point needs 0 <= r < 1");
  const SphereGeometry& geo = sol.geometry;
  const double r = p.r, z = r * r;
  std::vector<double> B(sol.f.L() + 1);
  basis_all(geo, sol.f.L(), p.t, B.data());
  PoissonValue out;
  long double sum = 0.0L;
  double rl = 1.0, last = 0.0;
  for (int l = 0; l <= sol.f.L(); ++l, rl *= r) {
    double a = sol.f.coeffs[l];
    if (a == 0.0) continue;
    double term = phi_l(geo, sol.gamma, l, z) * rl * a * B[l];
    sum += term;
    last = std::abs(term);
    out.terms = l + 1;
  }
  double scale = std::pow(p.rho0(), geo.n - sol.s);
  out.value = scale * static_cast<double>(sum);
  out.tail = scale * last * r;
  return out;
}

double poisson_eval_series(const PoissonSolution& sol, const BallPoint& p) {
  return poisson_eval_series_with_report(sol, p).value;
}

double poisson_origin_integral_form(const SphereGeometry& geo, double gamma) {
  return poisson_prefactor(geo, gamma) * geo.volume;
}

double poisson_origin_series_form(const SphereGeometry& geo, double gamma) {
  double n = geo.n, s = 0.5 * n + gamma;
  return std::pow(0.5, n - s) * gamma_ratio_real(gamma + 0.5, 2.0 * gamma) *
         gamma_ratio_real(0.5 * n + gamma, 0.5 * (n + 1));
}

double c_gamma(double gamma) {
  if (near_integer(gamma) && gamma > 0.0) return 0.0;
  return std::pow(2.0, 2.0 * gamma) * gamma_ratio_real(gamma, -gamma);
}

double c_gamma_inverse(double gamma) {
  if (near_integer(gamma)) throw IntegerGamma("c_gamma vanishes at integer gamma");
  return std::pow(2.0, -2.0 * gamma) * gamma_ratio_real(-gamma, gamma);
}

double scattering_multiplier(const SphereGeometry& geo, double gamma, int l) {
  return c_gamma_inverse(gamma) * gjms_multiplier(geo, gamma, l);
}

ZonalFunction scattering_apply(const ZonalFunction& f, double gamma) {
  if (near_integer(gamma)) throw IntegerGamma("scattering operator needs non-integer gamma");
  ZonalFunction g = f;
  double ci = c_gamma_inverse(gamma);
  for (int l = 0; l <= f.L(); ++l) g.coeffs[l] *= ci * gjms_multiplier(f.geometry, gamma, l);
  return g;
}

void extension_mode_coeffs(const SphereGeometry& geo, int l, double gp, int order, std::vector<double>& first,
                           std::vector<double>& second) {
  if (near_integer(gp)) throw IntegerGamma("extension jet needs non-integer gamma'");
  const double h = 0.5 * geo.n;
  // coefficients of (1-x)^l F(a, b; c; x), then x = rho^2 / 4
  auto series = [&](double a, double b, double c, std::vector<double>& out) {
    std::vector<long double> F(order + 1), binom(l + 1);
    F[0] = 1.0L;
    for (int k = 1; k <= order; ++k)
      F[k] = F[k - 1] * (static_cast<long double>(a) + k - 1) * (static_cast<long double>(b) + k - 1) /
             ((static_cast<long double>(c) + k - 1) * k);
    binom[0] = 1.0L;
    for (int i = 1; i <= l; ++i) binom[i] = binom[i - 1] * (l - i + 1) / i;
    out.assign(order + 1, 0.0);
    long double p4 = 1.0L;
    for (int m = 0; m <= order; ++m) {
      long double acc = 0.0L;
      for (int i = 0; i <= std::min(l, m); ++i) acc += ((i % 2) ? -binom[i] : binom[i]) * F[m - i];
      out[m] = static_cast<double>(acc * p4);
      p4 *= 0.25L;
    }
  };
  series(l + h - gp, l + h, 1.0 - gp, first);
  series(l + h + gp, l + h, 1.0 + gp, second);
  double scale = scattering_multiplier(geo, gp, l);
  for (double& c : second) c *= scale;
}

ExtensionSeries extension_series(const ZonalFunction& f, double gp, int order) {
  const SphereGeometry& geo = f.geometry;
  ExtensionSeries es;
  es.exp1 = 0.5 * geo.n - gp;
  es.exp2 = 0.5 * geo.n + gp;
  es.first.assign(order + 1, ZonalFunction(geo, f.L()));
  es.second.assign(order + 1, ZonalFunction(geo, f.L()));
  std::vector<double> c1, c2;
  for (int l = 0; l <= f.L(); ++l) {
    if (f.coeffs[l] == 0.0) continue;
    extension_mode_coeffs(geo, l, gp, order, c1, c2);
    for (int m = 0; m <= order; ++m) {
      es.first[m].coeffs[l] = f.coeffs[l] * c1[m];
      es.second[m].coeffs[l] = f.coeffs[l] * c2[m];
    }
  }
  return es;
}

RhoJet extension_jet(const ZonalFunction& f, double gp, int order) {
  ExtensionSeries es = extension_series(f, gp, order);
  RhoJet J(f.geometry, gp, es.exp1, order, f.L());
  accumulate(J, es.exp1, es.first);
  accumulate(J, es.exp2, es.second);
  return J;
}

RhoJet extension_jet(const SphereGeometry& geo, int l, double gp, int order) {
  return extension_jet(ZonalFunction::mode(geo, l), gp, order);
}

double pde_residual(const PoissonSolution& sol, const BallPoint& p, double h) {
  const double n = sol.geometry.n, r = p.r, t = p.t;
  auto u = [&](double rr, double tt) { return poisson_eval_series(sol, {rr, tt}); };
  double u0 = u(r, t);
  double rp1 = u(r + h, t), rm1 = u(r - h, t), rp2 = u(r + 2 * h, t), rm2 = u(r - 2 * h, t);
  double tp1 = u(r, t + h), tm1 = u(r, t - h), tp2 = u(r, t + 2 * h), tm2 = u(r, t - 2 * h);
  double ur = (-rp2 + 8 * rp1 - 8 * rm1 + rm2) / (12 * h);
  double urr = (-rp2 + 16 * rp1 - 30 * u0 + 16 * rm1 - rm2) / (12 * h * h);
  double ut = (-tp2 + 8 * tp1 - 8 * tm1 + tm2) / (12 * h);
  double utt = (-tp2 + 16 * tp1 - 30 * u0 + 16 * tm1 - tm2) / (12 * h * h);
  double q = 1.0 - r * r;
  double flat = urr + n / r * ur + ((1 - t * t) * utt - n * t * ut) / (r * r);
  double lap = 0.25 * q * (q * flat + 2.0 * (n - 1.0) * r * ur);
  double s = sol.s;
  return std::abs(-lap - s * (n - s) * u0) / std::abs(u0);
}

double mode_ode_residual(const SphereGeometry& geo, double gamma, int l, double z, double h) {
  double hn = 0.5 * geo.n;
  double a = l + hn - gamma, b = 0.5 - gamma, c = l + hn + 0.5;
  auto v = [&](double x) { return hyp2f1(a, b, c, x); };
  double v0 = v(z), p1 = v(z + h), m1 = v(z - h), p2 = v(z + 2 * h), m2 = v(z - 2 * h);
  double d1 = (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * h);
  double d2 = (-p2 + 16 * p1 - 30 * v0 + 16 * m1 - m2) / (12 * h * h);
  double t1 = z * (1 - z) * d2, t2 = (c - (a + b + 1) * z) * d1, t3 = a * b * v0;
  double scale = std::abs(t1) + std::abs(t2) + std::abs(t3);
  return std::abs(t1 + t2 - t3) / (scale > 0 ? scale : 1.0);
}

void write_solution_csv(std::ostream& os, const PoissonSolution& sol, const std::vector<double>& r,
                        const std::vector<double>& t) {
  os << "r,t,u\n";
  os.precision(17);
  for (double rr : r)
    for (double tt : t) os << rr << ',' << tt << ',' << poisson_eval_series(sol, {rr, tt}) << '\n';
}

}  // namespace gjmslab
