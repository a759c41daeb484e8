#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <random>

#include "gjmslab/boundary.hpp"
#include "gjmslab/errors.hpp"

using namespace gjmslab;

namespace {
double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }
double maxc(const ZonalFunction& f) {
  double m = 0.0;
  for (double c : f.coeffs) m = std::max(m, std::fabs(c));
  return m;
}
double diff(const ZonalFunction& a, const ZonalFunction& b) { return maxc(a - b); }
double jet_value(const RhoJet& J, double rho, double t) {
  double s = 0.0;
  for (int m = 0; m <= J.order; ++m)
    s += std::pow(rho, J.exponent(1, m)) * J.branch1[m](t) + std::pow(rho, J.exponent(2, m)) * J.branch2[m](t);
  return s;
}
const double kGammas[] = {0.3, 0.5, 1.3, 1.5, 2.6, 3.7};
}  // namespace

TEST_CASE("coefficient tables") {
  BoundaryCoefficients h = boundary_coeffs(0.5);
  CHECK(h.b_small[0] == 1.0);
  CHECK(rel(h.sigma[0], 1.0) < 1e-14);
  CHECK(rel(h.zeta[0], 1.0) < 1e-14);
  CHECK(rel(h.sigma_closed[0], 1.0) < 1e-14);
  CHECK(rel(h.zeta_closed[0], 1.0) < 1e-14);
  CHECK(rel(h.c_gammas.at(0.5), -1.0) < 1e-14);

  for (double g = 0.05; g < 4.0; g += 0.1) {
    if (std::fabs(g - std::round(g)) < 1e-9) continue;
    BoundaryCoefficients bc = boundary_coeffs(g);
    CHECK(bc.b_small[0] == 1.0);
    for (size_t j = 0; j < bc.b_small.size(); ++j) CHECK(rel(bc.b_small_closed[j], bc.b_small[j]) < 1e-10);
    // the closed form of the fractional family is a quarter of the normalizing product
    for (size_t j = 0; j < bc.b_small_frac.size(); ++j) CHECK(rel(4.0 * bc.b_small_frac_closed[j], bc.b_small_frac[j]) < 1e-10);
    for (size_t j = 0; j < bc.sigma.size(); ++j) {
      CHECK(rel(bc.sigma_closed[j], bc.sigma[j]) < 1e-10);
      // the closed large-index form carries an extra 2^{4j}
      double extra = static_cast<int>(j) <= bc.split.half ? 1.0 : std::pow(2.0, 4.0 * j);
      CHECK(rel(bc.zeta_closed[j], extra * bc.zeta[j]) < 1e-10);
      CHECK(bc.zeta[j] > 0.0);
    }
  }
  CHECK_THROWS_AS(boundary_coeffs(2.0), IntegerGamma);
}

TEST_CASE("jet laplacian") {
  SphereGeometry geo(3);
  double g = 1.3;
  ZonalFunction f = ZonalFunction::mode(geo, 2, 1.0, 4) + ZonalFunction::constant(geo, 0.5);
  RhoJet U(geo, g, geo.n / 2.0 - g, 6, 4);
  U.branch1[0] = f;
  RhoJet R = jet_laplacian(U);
  CHECK(diff(R.branch1[0], g * g * f) < 1e-14);

  double alpha = 0.7;
  RhoJet one(geo, g, alpha, 4, 0);
  one.branch1[0] = ZonalFunction::constant(geo, 1.0);
  CHECK(std::fabs(jet_laplacian(one).branch1[1].coeffs[0] + alpha * geo.n / 2.0) < 1e-14);

  // finite differences of the ball Laplacian in (r, t) on rho^alpha B_2
  for (int n = 1; n <= 3; ++n) {
    SphereGeometry gn(n);
    RhoJet J(gn, g, alpha, 40, 2);
    J.branch1[0] = ZonalFunction::mode(gn, 2);
    RhoJet DJ = jet_laplacian(J);
    auto u = [&](double r, double t) { return std::pow(BallPoint{r, t}.rho(), alpha) * basis_eval(gn, 2, t); };
    BallPoint p = BallPoint::from_rho(0.1, 0.3);
    double r = p.r, t = p.t, hh = 1e-3;
    double u0 = u(r, t);
    auto d1 = [&](double a, double b, double c, double d) { return (-a + 8 * b - 8 * c + d) / (12 * hh); };
    auto d2 = [&](double a, double b, double c, double d) { return (-a + 16 * b - 30 * u0 + 16 * c - d) / (12 * hh * hh); };
    double rp2 = u(r + 2 * hh, t), rp1 = u(r + hh, t), rm1 = u(r - hh, t), rm2 = u(r - 2 * hh, t);
    double tp2 = u(r, t + 2 * hh), tp1 = u(r, t + hh), tm1 = u(r, t - hh), tm2 = u(r, t - 2 * hh);
    double ur = d1(rp2, rp1, rm1, rm2), urr = d2(rp2, rp1, rm1, rm2);
    double ut = d1(tp2, tp1, tm1, tm2), utt = d2(tp2, tp1, tm1, tm2);
    double q = 1 - r * r;
    double lap = 0.25 * q * (q * (urr + n / r * ur + ((1 - t * t) * utt - n * t * ut) / (r * r)) + 2 * (n - 1) * r * ur);
    double fd = lap + n * n / 4.0 * u0;
    CHECK(rel(jet_value(DJ, 0.1, 0.3), fd) < 1e-5);
  }
}

TEST_CASE("small index normalization and annihilation") {
  std::mt19937_64 rng(1);
  SphereGeometry geo(2);
  for (double g : kGammas) {
    GammaSplit s = split_gamma(g);
    int M = default_jet_order(g);
    ZonalFunction f = random_band_limited(geo, 6, rng);
    for (int j = 0; j <= s.small_int_max(); ++j) {
      CHECK(diff(boundary_op_small(monomial_jet(f, g, 2 * j, M), j, Family::integer), f) < 1e-12 * maxc(f));
      for (int m = 1; m <= 3; ++m)
        CHECK(maxc(boundary_op_small(monomial_jet(f, g, 2 * j + 2 * m, M), j, Family::integer)) == 0.0);
      for (int m = 0; m <= 3; ++m)
        CHECK(maxc(boundary_op_small(monomial_jet(f, g, 2 * s.frac + 2 * m, M), j, Family::integer)) == 0.0);
    }
    for (int j = 0; j <= s.small_frac_max(); ++j) {
      double e = 2 * j + 2 * s.frac;
      CHECK(diff(boundary_op_small(monomial_jet(f, g, e, M), j, Family::fractional), f) < 1e-12 * maxc(f));
      for (int m = 1; m <= 3; ++m)
        CHECK(maxc(boundary_op_small(monomial_jet(f, g, e + 2 * m, M), j, Family::fractional)) == 0.0);
      for (int m = 0; m <= 3; ++m)
        CHECK(maxc(boundary_op_small(monomial_jet(f, g, 2 * m, M), j, Family::fractional)) == 0.0);
    }
    CHECK_THROWS_AS(boundary_op_small(monomial_jet(f, g, 0, M), s.small_int_max() + 1, Family::integer), RangeError);
  }
}

TEST_CASE("expansion recovery") {
  std::mt19937_64 rng(2);
  SphereGeometry geo(3);
  for (double g : {1.3, 2.6, 3.7}) {
    GammaSplit s = split_gamma(g);
    int M = default_jet_order(g);
    RhoJet U = zero_jet(geo, g, M, 5);
    for (int m = 0; m <= M; ++m) {
      U.branch1[m] = random_band_limited(geo, 5, rng);
      U.branch2[m] = random_band_limited(geo, 5, rng);
    }
    RhoJet rest = U;
    for (int j = 0; j <= s.small_int_max(); ++j) {
      ZonalFunction fj = boundary_op_small(rest, j, Family::integer);
      CHECK(diff(fj, U.branch1[j]) < 1e-10 * (1 + maxc(U.branch1[j])));
      rest -= monomial_jet(fj, g, 2 * j, M);
    }
    rest = U;
    for (int j = 0; j <= s.small_frac_max(); ++j) {
      ZonalFunction fj = boundary_op_small(rest, j, Family::fractional);
      CHECK(diff(fj, U.branch2[j]) < 1e-10 * (1 + maxc(U.branch2[j])));
      rest -= monomial_jet(fj, g, 2 * s.frac + 2 * j, M);
    }
  }
}

TEST_CASE("dirichlet extension") {
  std::mt19937_64 rng(3);
  SphereGeometry geo(2);
  ZonalFunction f = random_band_limited(geo, 6, rng);
  RhoJet U = dirichlet_extend({{f}, {}}, 0.7);
  CHECK(diff(boundary_op_small(U, 0, Family::integer), f) < 1e-12);
  CHECK_THROWS_AS(dirichlet_extend({{f, f}, {}}, 0.7), RangeError);

  for (double g : {0.5, 1.3, 2.6, 3.7}) {
    BoundaryData d = random_boundary_data(geo, g, 6, rng);
    RhoJet Ut = dirichlet_extend(d, g);
    BoundaryData back = boundary_data_of(Ut);
    for (size_t j = 0; j < d.f2j.size(); ++j) CHECK(diff(back.f2j[j], d.f2j[j]) < 1e-9);
    for (size_t m = 0; m < d.phi2m.size(); ++m) CHECK(diff(back.phi2m[m], d.phi2m[m]) < 1e-9);
    // annihilated by the full product of factors
    GammaSplit s = split_gamma(g);
    RhoJet W = shift(Ut, geo.n / 2.0 - g);
    for (int l = 0; l <= s.floor; ++l) W = jet_factor(W, g - 2 * l);
    // zero in exact arithmetic; rounding grows with the size of the factors at each order
    for (int b = 1; b <= 2; ++b)
      for (int m = 0; m <= W.order; ++m) {
        double e = W.exponent(b, m) - geo.n / 2.0;
        double tol = 1e-13 * Ut.max_abs() * std::pow(1.0 + e * e, s.floor + 1);
        CHECK(maxc(W.at(b, m)) <= tol);
      }
    CHECK(is_polyharmonic(Ut));

    BoundaryData zero = d;
    for (auto& z : zero.f2j) z *= 0.0;
    for (auto& z : zero.phi2m) z *= 0.0;
    CHECK(dirichlet_extend(zero, g).max_abs() == 0.0);
  }
}

TEST_CASE("large index operators") {
  std::mt19937_64 rng(4);
  for (int n : {1, 2, 3}) {
    SphereGeometry geo(n);
    for (double g : {0.5, 1.3, 2.6, 3.7}) {
      GammaSplit s = split_gamma(g);
      int M = default_jet_order(g);
      BoundaryData d = random_boundary_data(geo, g, 6, rng);
      RhoJet Ut = dirichlet_extend(d, g);
      // intrinsic identity, both families
      for (int j = 0; j <= s.half; ++j) {
        double gp = g - 2 * j;
        ZonalFunction expect = c_gamma_inverse(gp) * apply_spectrum(gjms_spectrum(geo, gp, 6), d.f2j[j]);
        ZonalFunction got = boundary_op_intrinsic(Ut, s.floor - j, Family::fractional);
        CHECK(diff(got, expect) < 1e-9 * (1 + maxc(expect)));
        CHECK(diff(boundary_op_large(Ut, Ut, s.floor - j, Family::fractional), expect) < 1e-12 * (1 + maxc(expect)));
      }
      for (int m = 0; m <= s.small_frac_max(); ++m) {
        double gp = s.floor - s.frac - 2 * m;
        ZonalFunction expect = c_gamma_inverse(gp) * apply_spectrum(gjms_spectrum(geo, gp, 6), d.phi2m[m]);
        ZonalFunction got = boundary_op_intrinsic(Ut, s.floor - m, Family::integer);
        CHECK(diff(got, expect) < 1e-9 * (1 + maxc(expect)));
      }
      // normalization in the large range
      ZonalFunction one = ZonalFunction::constant(geo, 1.0);
      for (int J = s.half + 1; J <= s.floor; ++J) {
        RhoJet P = monomial_jet(one, g, 2 * J, M);
        RhoJet Pt = dirichlet_extend(boundary_data_of(P), g, M);
        CHECK(std::fabs(boundary_op_large(P, Pt, J, Family::integer).coeffs[0] - 1.0) < 1e-12);
      }
      for (int J = s.floor - s.half; J <= s.floor; ++J) {
        RhoJet P = monomial_jet(one, g, 2 * J + 2 * s.frac, M);
        RhoJet Pt = dirichlet_extend(boundary_data_of(P), g, M);
        CHECK(std::fabs(boundary_op_large(P, Pt, J, Family::fractional).coeffs[0] - 1.0) < 1e-12);
      }
      // perturbation that leaves the small data alone shifts the large value by the extracted coefficient
      int J = s.floor;
      double e = 2 * J + 2 * s.frac + 2;
      ZonalFunction h = random_band_limited(geo, 4, rng);
      RhoJet pert = monomial_jet(h, g, e, M);
      RhoJet U = Ut + pert;
      ZonalFunction shift_val = boundary_op_large(U, Ut, J, Family::fractional) - boundary_op_large(Ut, Ut, J, Family::fractional);
      ZonalFunction ex = pi_operator(shift(pert, n / 2.0 - g), g, 0).coefficient(n / 2.0 + g);
      ex *= 1.0 / boundary_coeffs(g).b_large[0];
      CHECK(diff(shift_val, ex) < 1e-12 * (1 + maxc(ex)));
    }
  }
}

TEST_CASE("dirichlet form symmetry and equality") {
  std::mt19937_64 rng(5);
  for (int n : {1, 2, 3}) {
    SphereGeometry geo(n);
    for (double g : {0.5, 1.3, 2.6}) {
      for (int rep = 0; rep < 3; ++rep) {
        BallField U = make_field(random_boundary_data(geo, g, 6, rng), g);
        BallField V = make_field(random_boundary_data(geo, g, 6, rng), g);
        FormReport uv = dirichlet_form_report(U, V), vu = dirichlet_form_report(V, U);
        CHECK(uv.route == "boundary");
        double scale = std::fabs(uv.value) + std::fabs(dirichlet_form(U, U)) + std::fabs(dirichlet_form(V, V));
        CHECK(std::fabs(uv.value - vu.value) < 1e-8 * scale);
        FormReport uu = dirichlet_form_report(U, U);
        CHECK(std::fabs(uu.sigma_form - uu.zeta_form) < 1e-9 * std::fabs(uu.zeta_form));
      }
    }
    // harmonic extension with gamma = 1/2: Q = int f P_1 f
    ZonalFunction f = random_band_limited(geo, 8, rng);
    BallField U = make_field({{f}, {}}, 0.5);
    double expect = 0.0;
    for (int l = 0; l <= 8; ++l) expect += (l + (n - 1) / 2.0) * f.coeffs[l] * f.coeffs[l] * mode_norm(geo, l);
    CHECK(rel(dirichlet_form(U, U), expect) < 1e-10);
  }
}

TEST_CASE("energy inequality with interior perturbations") {
  std::mt19937_64 rng(6);
  for (int n : {1, 2, 3}) {
    SphereGeometry geo(n);
    for (double g : {0.5, 1.3, 2.6}) {
      GammaSplit s = split_gamma(g);
      BoundaryData d = random_boundary_data(geo, g, 5, rng);
      double e = n / 2.0 - g + 2 * (s.half + 1);
      int l = 2;
      ZonalFunction h = ZonalFunction::mode(geo, l, 1.0 / std::sqrt(mode_norm(geo, l)));
      Perturbation base{{{{1.0, e, double(l + 2 * s.floor + 6)}, {-0.4, e + 2, double(l + 2 * s.floor + 6)}}}, h};
      double prev = 0.0;
      for (double eps : {0.1, 0.2, 0.4}) {
        Perturbation p = base;
        p.w *= eps;
        BallField U = make_field(d, g, -1, p);
        FormReport r = dirichlet_form_report(U, U);
        CHECK(r.route == "energy+interior");
        double gap = r.value - r.zeta_form;
        CHECK(gap >= -1e-8);
        CHECK(gap > 0.0);
        if (prev > 0.0) CHECK(rel(gap / prev, 4.0) < 1e-8);
        prev = gap;
        CHECK_THROWS_AS(dirichlet_form(BallField{U.jet, std::nullopt}, BallField{U.jet, std::nullopt}), NotPolyharmonic);
      }
      // second admissible exponent family
      double e2 = n / 2.0 + g - 2 * s.half;
      Perturbation p2{{{{0.3, e2, double(l + 2 * s.floor + 6)}}}, h};
      CHECK(interior_energy(p2, p2, g) > 0.0);
      Perturbation bad{{{{1.0, n / 2.0 - g, 8.0}}}, h};
      CHECK_THROWS_AS(check_perturbation(bad, g), DomainError);
    }
  }
}

TEST_CASE("green identity") {
  for (int n : {1, 2, 3}) {
    SphereGeometry geo(n);
    RadialMode U{{{{1.0, n / 2.0 + 0.4, 0.0}}}, 0}, V{{{{1.0, n / 2.0 + 1.1, 0.0}}}, 0};
    GreenReport r = green_identity_check(U, V, geo);
    CHECK(r.residual < 1e-6);
    CHECK(r.boundary == 0.0);
    double g = 0.7;
    RadialMode A{{{{1.0, n / 2.0 - g, 6.0}}}, 2}, B{{{{1.0, n / 2.0 + g, 6.0}, {0.5, n / 2.0 + g + 2, 6.0}}}, 2};
    GreenReport r2 = green_identity_check(A, B, geo);
    double expect = 2 * g * mode_norm(geo, 2);
    CHECK(rel(r2.boundary, expect) < 1e-10);
    CHECK(r2.residual < 1e-6 * std::fabs(r2.boundary));
    GreenReport r3 = green_identity_check(A, A, geo);
    CHECK(std::fabs(r3.interior) < 1e-12);
    CHECK(r3.boundary == 0.0);
  }
}

TEST_CASE("hardy inequality") {
  SphereGeometry geo(2);
  auto prof = [](double beta, double c) {
    return HardyProfile{[=](double r, double om) { return c * std::pow(om * (1 + r), beta); },
                        [=](double r, double om) { return -2 * beta * r * c * std::pow(om * (1 + r), beta - 1); }, 0};
  };
  DeficitReport a = hardy_check(prof(1.2, 1.0), geo);
  CHECK(a.deficit > 0.0);
  DeficitReport b = hardy_check(prof(1.2, 3.0), geo);
  CHECK(rel(b.deficit, 9.0 * a.deficit) < 1e-10);
  double prev = 1e300;
  for (double beta : {0.9, 0.7, 0.6, 0.55, 0.52}) {
    DeficitReport r = hardy_check(prof(beta, 1.0), geo);
    CHECK(r.deficit > 0.0);
    CHECK(r.relative < prev);
    prev = r.relative;
  }
  CHECK(prev < 0.1);
}

TEST_CASE("trace inequalities") {
  std::mt19937_64 rng(8);
  SphereGeometry g2(2);
  // Escobar with equality on the extremal family
  for (double a : {0.0, 0.3, -0.5}) {
    ZonalFunction f = extremal_profile(a, 0.5, g2, 48);
    DeficitReport r = trace_deficit({{f}, {}}, 0.5, g2);
    CHECK(std::fabs(r.deficit) < 1e-7 * std::max(1.0, r.lhs));
  }
  for (int rep = 0; rep < 5; ++rep) {
    ZonalFunction f = random_band_limited(g2, 8, rng);
    CHECK(trace_deficit({{f}, {}}, 0.5, g2).deficit >= -1e-8);
  }
  // Lebedev-Milin
  SphereGeometry g1(1);
  CHECK(trace_case_label(g1, 0.5) == "case I(1)");
  for (int rep = 0; rep < 5; ++rep) {
    ZonalFunction f = random_band_limited(g1, 10, rng);
    DeficitReport r = trace_deficit({{f}, {}}, 0.5, g1);
    CHECK(r.deficit >= -1e-8);
  }
  // case II with nontrivial ranges
  SphereGeometry g3(3);
  CHECK(trace_case_label(g3, 2.6) == "case II");
  for (int rep = 0; rep < 5; ++rep) {
    BoundaryData d = random_boundary_data(g3, 2.6, 6, rng);
    d.f2j[0] = random_positive(g3, 6, rng);
    DeficitReport r = trace_deficit(d, 2.6, g3);
    CHECK(r.deficit >= -1e-8);
    CHECK(rel(r.lhs, r.extras.at("zeta_form")) < 1e-8);
  }
  BoundaryData bad = random_boundary_data(g3, 2.6, 6, rng);
  bad.f2j[0] = ZonalFunction::constant(g3, -1.0) + 0.1 * bad.f2j[0];
  CHECK_THROWS_AS(trace_deficit(bad, 2.6, g3), UnimplementedCase);
  CHECK_THROWS_AS(trace_case_label(g1, 1.5), UnimplementedCase);
  CHECK(trace_case_label(g3, 0.7) == "subcritical");
}

TEST_CASE("conformal covariance") {
  std::mt19937_64 rng(9);
  SphereGeometry geo(2);
  double g = 1.3;
  BoundaryData d = random_boundary_data(geo, g, 5, rng);
  RhoJet U = dirichlet_extend(d, g);
  ZonalFunction zero(geo, 0);
  CHECK(conformal_covariance_check(U, {zero}, 0, Family::integer) < 1e-13);
  CHECK(conformal_covariance_check(U, {ZonalFunction::constant(geo, 0.2)}, 0, Family::integer) < 1e-12);
  ZonalFunction t1 = ZonalFunction::mode(geo, 1, 0.3);
  CHECK(conformal_covariance_check(U, {t1}, 0, Family::integer) < 1e-8);
  CHECK(conformal_covariance_check(U, {t1, 0.1 * t1}, 0, Family::fractional) < 1e-8);
  double g2 = 2.6;
  RhoJet U2 = dirichlet_extend(random_boundary_data(geo, g2, 5, rng), g2);
  CHECK(conformal_covariance_check(U2, {t1}, 1, Family::integer) < 1e-8);
  CHECK_THROWS_AS(conformal_covariance_check(U2, {t1}, 2, Family::integer), RangeError);
}
