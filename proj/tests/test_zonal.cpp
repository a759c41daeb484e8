#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "gjmslab/errors.hpp"
#include "gjmslab/zonal.hpp"

using namespace gjmslab;

namespace {
const double kPi = 3.14159265358979323846;
double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }
}  // namespace

TEST_CASE("sphere volumes") {
  for (int n = 1; n <= 8; ++n) {
    SphereGeometry g(n);
    CHECK(rel(g.volume * std::tgamma(0.5 * (n + 1)), 2 * std::pow(kPi, 0.5 * (n + 1))) < 1e-13);
  }
  CHECK(rel(SphereGeometry(2).volume, 4 * kPi) < 1e-15);
  CHECK(rel(SphereGeometry(3).volume, 2 * kPi * kPi) < 1e-15);
}

TEST_CASE("synthesize examples") {
  SphereGeometry g2(2);
  auto grid = make_grid(g2, 32);
  auto v = synthesize(ZonalFunction::constant(g2, 1.0, 5), grid);
  for (double x : v) CHECK(std::fabs(x - 1.0) < 1e-15);
  CHECK(rel(ZonalFunction::mode(g2, 2)(0.5), -0.125) < 1e-15);
  std::mt19937_64 rng(1);
  auto f = random_band_limited(g2, 10, rng), h = random_band_limited(g2, 10, rng);
  auto a = synthesize(f + h, grid), b = synthesize(f, grid), c = synthesize(h, grid);
  for (size_t i = 0; i < a.size(); ++i) CHECK(std::fabs(a[i] - b[i] - c[i]) < 1e-14);
  CHECK_THROWS_AS(synthesize(f, make_grid(SphereGeometry(3), 32)), GridMismatch);
  auto rule = gauss_gegenbauer_rule(1.0, 16);
  CHECK_THROWS_AS(make_grid(g2, *rule), GridMismatch);
  CHECK_NOTHROW(make_grid(SphereGeometry(3), *rule));
}

TEST_CASE("analyze recovers modes and roundtrips") {
  for (int n : {1, 2, 3, 4}) {
    SphereGeometry geo(n);
    auto grid = make_grid(geo, 40);
    auto v = synthesize(ZonalFunction::mode(geo, 3), grid);
    auto f = analyze(v, grid, geo, 10);
    for (int l = 0; l <= 10; ++l) CHECK(std::fabs(f.coeffs[l] - (l == 3 ? 1.0 : 0.0)) < 1e-11);
    std::mt19937_64 rng(n);
    auto r = random_band_limited(geo, 20, rng);
    auto back = analyze(synthesize(r, make_grid(geo, 21)), make_grid(geo, 21), geo, 20);
    double err = 0;
    for (double t = -1; t <= 1; t += 0.01) err = std::max(err, std::fabs(back(t) - r(t)));
    CHECK(err < 1e-11);
  }
}

TEST_CASE("mode_l2 matches quadrature of the squared mode") {
  boost::math::quadrature::tanh_sinh<double> ts;
  for (int n : {2, 3, 4, 5}) {
    SphereGeometry geo(n);
    for (int l = 0; l < 12; ++l) {
      auto f = ZonalFunction::mode(geo, l, 0.7);
      double o = geo.boundary_volume *
                 ts.integrate([&](double t) { double v = f(t); return v * v * std::pow(1 - t * t, 0.5 * (n - 2)); }, -1.0, 1.0);
      CHECK(rel(f.mode_l2(l), o) < 1e-12);
    }
  }
  SphereGeometry c(1);
  CHECK(rel(mode_norm(c, 0), 2 * kPi) < 1e-15);
  CHECK(rel(mode_norm(c, 4), kPi) < 1e-15);
}

TEST_CASE("aliasing report") {
  SphereGeometry geo(2);
  int L = 8;
  // degree L+1 content on a grid of L+1 nodes: no headroom above L
  auto tight = make_grid(geo, L + 1);
  auto f = ZonalFunction::mode(geo, L + 1) + ZonalFunction::constant(geo, 1.0);
  auto rep = analyze_with_report(synthesize(f, tight), tight, geo, L);
  CHECK_FALSE(rep.certified);
  CHECK(!rep.warning.empty());
  // with headroom the tail is measured
  auto wide = make_grid(geo, 4 * L);
  auto rep2 = analyze_with_report(synthesize(f, wide), wide, geo, L);
  CHECK_FALSE(rep2.certified);
  CHECK(rel(rep2.tail_energy, f.mode_l2(L + 1)) < 1e-10);
  auto rep3 = analyze_with_report(synthesize(f.truncated(L), wide), wide, geo, L);
  CHECK(rep3.certified);
}

TEST_CASE("integrate examples") {
  SphereGeometry g3(3), g2(2);
  CHECK(rel(integrate([](double) { return 1.0; }, g3), 2 * kPi * kPi) < 1e-13);
  for (int n = 1; n <= 4; ++n) CHECK(std::fabs(integrate([](double t) { return t; }, SphereGeometry(n))) < 1e-13);
  CHECK(rel(integrate([](double t) { return t * t; }, g2), 4 * kPi / 3) < 1e-13);
  // circle: integral of cos^2 over S^1
  CHECK(rel(integrate([](double t) { return t * t; }, SphereGeometry(1)), kPi) < 1e-13);
}

TEST_CASE("lp_norm") {
  SphereGeometry g3(3);
  auto grid = make_grid(g3, 64);
  std::vector<double> c(64, 2.5);
  CHECK(rel(lp_norm(c, grid, g3, -3.0), 2.5 * std::pow(g3.volume, -1.0 / 3)) < 1e-13);
  std::mt19937_64 rng(9);
  auto f = random_band_limited(g3, 12, rng);
  CHECK(rel(lp_norm(synthesize(f, grid), grid, g3, 2.0), std::sqrt(f.l2_squared())) < 1e-12);
  auto v = synthesize(f, grid);
  v[3] = -1.0;
  CHECK_THROWS_AS(lp_norm(v, grid, g3, -2.0), NonPositiveValue);
  CHECK_THROWS_AS(lp_norm(v, grid, g3, 1.5), NonPositiveValue);
  // homogeneity
  auto fp = random_positive(g3, 8, rng);
  auto vp = synthesize(fp, grid);
  for (double p : {-6.0, -2.5, 1.3, 2.0, 4.0}) {
    auto w = vp;
    for (double& x : w) x *= 3.7;
    CHECK(rel(lp_norm(w, grid, g3, p), 3.7 * lp_norm(vp, grid, g3, p)) < 1e-12);
  }
}

TEST_CASE("negative-exponent norm of a function touching zero decreases with refinement") {
  SphereGeometry g3(3);
  double prev = 1e300;
  for (int M : {64, 128, 256, 512}) {
    auto grid = make_grid(g3, M);
    std::vector<double> v(M);
    for (int i = 0; i < M; ++i) v[i] = 1 - grid.t[i];
    double nrm = lp_norm(v, grid, g3, -6.0);
    CHECK(nrm < prev);
    prev = nrm;
  }
  auto r = lp_norm_refined([](double t) { return 1 - t; }, g3, -6.0, 128);
  CHECK(r.fine < r.coarse);
  CHECK(r.spread() > 0.01);
}

TEST_CASE("Parseval on random band-limited functions") {
  for (int n : {1, 2, 3, 5}) {
    SphereGeometry geo(n);
    std::mt19937_64 rng(100 + n);
    for (int k = 0; k < 10; ++k) {
      auto f = random_band_limited(geo, 30, rng);
      auto grid = make_grid(geo, 64);
      auto v = synthesize(f, grid);
      for (double& x : v) x *= x;
      CHECK(rel(integrate(v, grid, geo), f.l2_squared()) < 1e-10);
    }
  }
}

TEST_CASE("reverse Hoelder building block") {
  for (int n : {1, 2, 3}) {
    SphereGeometry geo(n);
    std::mt19937_64 rng(40 + n);
    std::uniform_real_distribution<double> ug(0.5 * n + 1.05, 0.5 * n + 1.95);
    for (int k = 0; k < 50; ++k) {
      double gamma = ug(rng);
      double p = 2.0 * n / (n - 2 * gamma);
      auto f = random_positive(geo, 8, rng);
      auto grid = make_grid(geo, 128);
      auto v = synthesize(f, grid);
      double lhs = integrate(v, grid, geo);
      double rhs = lp_norm(v, grid, geo, p) * std::pow(geo.volume, (n + 2 * gamma) / (2.0 * n));
      CHECK(lhs - rhs >= -1e-10 * lhs);
    }
  }
}

TEST_CASE("zonal product and csv") {
  SphereGeometry geo(2);
  auto a = ZonalFunction::mode(geo, 1), b = ZonalFunction::mode(geo, 1);
  auto p = multiply(a, b);
  // t^2 = (2 P_2 + 1)/3
  CHECK(std::fabs(p.coeffs[0] - 1.0 / 3) < 1e-14);
  CHECK(std::fabs(p.coeffs[2] - 2.0 / 3) < 1e-14);
  std::stringstream ss;
  write_coeffs_csv(ss, p);
  auto q = read_coeffs_csv(ss, geo);
  for (int l = 0; l <= p.L(); ++l) CHECK(q.coeffs[l] == p.coeffs[l]);
  std::stringstream s2;
  write_samples_csv(s2, {0.1, 0.2}, {1.5, -2.5});
  std::vector<double> t, v;
  read_samples_csv(s2, t, v);
  CHECK(t.size() == 2);
  CHECK(v[1] == -2.5);
}

TEST_CASE("random_positive is positive and unit norm") {
  std::mt19937_64 rng(5);
  for (int n : {1, 2, 3}) {
    SphereGeometry geo(n);
    for (int k = 0; k < 20; ++k) {
      auto f = random_positive(geo, 8, rng);
      CHECK(grid_min(f, 400) > 0);
      CHECK(std::fabs(f.l2_squared() - 1.0) < 1e-12);
    }
  }
}
