#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_pFq.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "gjmslab/errors.hpp"
#include "gjmslab/gjms.hpp"
#include "gjmslab/scattering.hpp"

using namespace gjmslab;

namespace {
const double kPi = 3.14159265358979323846;
double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

double jet_sum(const RhoJet& J, double rho, double t) {
  double s = 0.0;
  for (int m = 0; m <= J.order; ++m)
    s += std::pow(rho, J.exponent(1, m)) * J.branch1[m](t) + std::pow(rho, J.exponent(2, m)) * J.branch2[m](t);
  return s;
}
}  // namespace

TEST_CASE("ball point geometry") {
  for (double r : {0.0, 0.1, 0.5, 0.9, 0.999}) {
    BallPoint p{r, 0.2};
    double rho = p.rho();
    CHECK(std::fabs(p.rho0() - rho / ((1 + rho / 2) * (1 + rho / 2))) < 1e-14);
    CHECK(rho > 0.0);
    CHECK(rho <= 2.0);
    CHECK(std::fabs(BallPoint::from_rho(rho, 0.2).r - r) < 1e-14);
  }
  CHECK(BallPoint{0.0, 1.0}.rho() == 2.0);
}

TEST_CASE("value at the origin") {
  for (int n = 1; n <= 4; ++n)
    for (double g : {0.3, 0.5, 0.7, 1.3, 2.6}) {
      SphereGeometry geo(n);
      double s = n / 2.0 + g;
      double oracle = std::pow(kPi, -n / 2.0) * std::pow(2.0, -s) * boost::math::tgamma(n / 2.0 + g) /
                      boost::math::tgamma(g) * 2 * std::pow(kPi, (n + 1) / 2.0) / boost::math::tgamma((n + 1) / 2.0);
      CHECK(rel(poisson_origin_integral_form(geo, g), oracle) < 1e-12);
      CHECK(rel(poisson_origin_series_form(geo, g), oracle) < 1e-12);
      PoissonSolution sol(ZonalFunction::constant(geo, 1.0), g);
      CHECK(rel(poisson_eval_integral(sol, {0.0, 1.0}), oracle) < 1e-11);
      CHECK(rel(poisson_eval_series(sol, {0.0, 1.0}), oracle) < 1e-12);
    }
}

TEST_CASE("radial factor normalization and oracle") {
  for (int n = 1; n <= 3; ++n)
    for (double g : {0.4, 0.7, 1.3, 2.6})
      for (int l = 0; l <= 12; ++l) {
        SphereGeometry geo(n);
        CHECK(rel(phi_l(geo, g, l, 1.0), 1.0) < 1e-12);
        double z = 0.36;
        double c = l + (n + 1) / 2.0;
        double F = boost::math::hypergeometric_pFq({l + n / 2.0 - g, 0.5 - g}, {c}, z);
        double pre = boost::math::tgamma(g + 0.5) * boost::math::tgamma(l + g + n / 2.0) /
                     (boost::math::tgamma(2 * g) * boost::math::tgamma(c));
        CHECK(rel(phi_l(geo, g, l, z), pre * F) < 1e-12);
      }
}

TEST_CASE("series and integral agree") {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 3; ++n)
    for (double g : {0.4, 1.3, 2.6}) {
      SphereGeometry geo(n);
      ZonalFunction f = random_band_limited(geo, 10, rng);
      PoissonSolution sol(f, g);
      for (double r : {0.1, 0.3, 0.5, 0.7, 0.9})
        for (double t : {-0.9, -0.4, 0.0, 0.3, 0.8}) {
          double a = poisson_eval_series(sol, {r, t});
          double b = poisson_eval_integral(sol, {r, t});
          double scale = poisson_eval_series(PoissonSolution(ZonalFunction::constant(geo, 1.0), g), {r, t});
          CHECK(std::fabs(a - b) <= 1e-8 * std::max(std::fabs(a), 1e-3 * scale));
        }
    }
  SphereGeometry geo(3);
  PoissonSolution sol(random_band_limited(geo, 8, rng), 0.7);
  double a = poisson_eval_series(sol, {0.5, 0.3}), b = poisson_eval_integral(sol, {0.5, 0.3});
  CHECK(rel(b, a) < 1e-8);
}

TEST_CASE("single mode isolation") {
  SphereGeometry geo(3);
  double g = 0.7;
  PoissonSolution sol(ZonalFunction::mode(geo, 2), g);
  for (double r : {0.2, 0.6})
    for (double t : {-0.3, 0.45}) {
      BallPoint p{r, t};
      double u = poisson_eval_series(sol, p);
      double q = u / (std::pow(p.rho0(), geo.n - sol.s) * r * r * basis_eval(geo, 2, t));
      CHECK(rel(q, phi_l(geo, g, 2, r * r)) < 1e-13);
    }
}

TEST_CASE("boundary recovery") {
  std::mt19937_64 rng(11);
  SphereGeometry geo(2);
  ZonalFunction f = ZonalFunction::constant(geo, 2.0) + random_band_limited(geo, 5, rng);
  PoissonSolution sol(f, 0.7);
  for (double t : {-0.5, 0.2}) {
    double prev = 1e300;
    for (int k = 2; k <= 4; ++k) {
      BallPoint p{1.0 - std::pow(10.0, -k), t};
      PoissonValue v = poisson_eval_integral_with_report(sol, p);
      double err = std::fabs(std::pow(p.rho0(), sol.s - geo.n) * v.value - f(t));
      CHECK(err < prev);
      CHECK(v.near_boundary == (k >= 2));
      prev = err;
    }
    CHECK(prev < 1e-4);
  }
}

TEST_CASE("interior equation residual") {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 3; ++n)
    for (double g : {0.4, 1.3, 2.6}) {
      SphereGeometry geo(n);
      PoissonSolution sol(ZonalFunction::constant(geo, 1.5) + random_band_limited(geo, 6, rng), g);
      for (double r : {0.2, 0.5, 0.8})
        for (double t : {-0.6, 0.1, 0.7}) CHECK(pde_residual(sol, {r, t}) < 1e-5);
    }
}

TEST_CASE("mode equation residual") {
  for (int n = 1; n <= 3; ++n)
    for (double g : {0.4, 1.3, 2.6})
      for (int l : {0, 1, 5})
        for (double z : {0.1, 0.5, 0.8}) CHECK(mode_ode_residual(SphereGeometry(n), g, l, z) < 1e-6);
}

TEST_CASE("c gamma and scattering multipliers") {
  CHECK(rel(c_gamma(0.5), -1.0) < 1e-15);
  CHECK(rel(c_gamma(1.3), std::pow(2.0, 2.6) * boost::math::tgamma(1.3) / boost::math::tgamma(-1.3)) < 1e-13);
  CHECK(c_gamma(2.0) == 0.0);
  CHECK_THROWS_AS(c_gamma_inverse(1.0), IntegerGamma);
  CHECK_THROWS_AS(scattering_apply(ZonalFunction::constant(SphereGeometry(2), 1.0), 2.0), IntegerGamma);

  SphereGeometry g2(2);
  ZonalFunction one = ZonalFunction::constant(g2, 1.0);
  CHECK(rel(scattering_apply(one, 0.5).coeffs[0], -0.5) < 1e-14);

  std::mt19937_64 rng(3);
  for (int n = 1; n <= 4; ++n) {
    SphereGeometry geo(n);
    ZonalFunction f = random_band_limited(geo, 20, rng);
    ZonalFunction S = scattering_apply(f, 0.5);
    for (int l = 0; l <= 20; ++l) CHECK(std::fabs(S.coeffs[l] + (l + (n - 1) / 2.0) * f.coeffs[l]) < 1e-13 * (1 + l));
    for (double g : {0.3, 1.7, 2.6}) {
      ZonalFunction Sg = scattering_apply(f, g);
      ZonalFunction P = apply_spectrum(gjms_spectrum(geo, g, 20), f);
      for (int l = 0; l <= 20; ++l) CHECK(std::fabs(Sg.coeffs[l] - c_gamma_inverse(g) * P.coeffs[l]) <=
                                          1e-13 * std::fabs(c_gamma_inverse(g) * P.coeffs[l]) + 1e-300);
    }
    ZonalFunction h = random_band_limited(geo, 20, rng);
    ZonalFunction lhs = scattering_apply(2.0 * f + h, 1.3), rhs = 2.0 * scattering_apply(f, 1.3) + scattering_apply(h, 1.3);
    for (int l = 0; l <= 20; ++l) CHECK(std::fabs(lhs.coeffs[l] - rhs.coeffs[l]) < 1e-12 * (1 + std::fabs(rhs.coeffs[l])));
  }
}

TEST_CASE("extension jet coefficients") {
  for (int n = 1; n <= 3; ++n)
    for (double gp : {0.4, 1.3, 2.6}) {
      SphereGeometry geo(n);
      for (int l = 0; l <= 20; ++l) {
        RhoJet J = extension_jet(geo, l, gp, 14);
        CHECK(std::fabs(J.coefficient(n / 2.0 - gp).coeffs[l] - 1.0) < 1e-15);
        double lead2 = J.coefficient(n / 2.0 + gp).coeffs[l];
        CHECK(rel(lead2, scattering_multiplier(geo, gp, l)) < 1e-10);
        if (l == 0) {
          double oracle = std::pow(2.0, -2 * gp) * boost::math::tgamma(-gp) / boost::math::tgamma(gp) *
                          boost::math::tgamma(n / 2.0 + gp) / boost::math::tgamma(n / 2.0 - gp);
          CHECK(rel(lead2, oracle) < 1e-12);
        }
        // each branch solves (Delta_+ + n^2/4 - gamma'^2) w = 0 order by order
        RhoJet R = jet_factor(J, gp);
        double scale = J.max_abs();
        for (int m = 0; m <= J.order; ++m) {
          CHECK(std::fabs(R.branch1[m].coeffs[l]) <= 1e-11 * scale);
          CHECK(std::fabs(R.branch2[m].coeffs[l]) <= 1e-11 * scale);
        }
      }
    }
  CHECK_THROWS_AS(extension_jet(SphereGeometry(2), 1, 2.0, 6), IntegerGamma);
}

TEST_CASE("jet sums match the series solution") {
  std::mt19937_64 rng(19);
  for (int n = 1; n <= 3; ++n)
    for (double g : {0.4, 1.3, 2.6}) {
      SphereGeometry geo(n);
      ZonalFunction f = random_band_limited(geo, 6, rng);
      PoissonSolution sol(f, g);
      RhoJet J = extension_jet(f, g, 16);
      BallPoint p{0.6, 0.35};
      double u = poisson_eval_series(sol, p);
      double v = jet_sum(J, p.rho(), p.t);
      CHECK(std::fabs(u - v) <= 1e-8 * std::max(std::fabs(u), 1.0));
    }
}

TEST_CASE("csv dump") {
  SphereGeometry geo(2);
  PoissonSolution sol(ZonalFunction::constant(geo, 1.0), 0.5);
  std::ostringstream os;
  write_solution_csv(os, sol, {0.1, 0.5}, {0.0, 0.5});
  std::istringstream is(os.str());
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 5);
}
