#include "gjmslab/boundary.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include "gjmslab/errors.hpp"
#include "gjmslab/gjms.hpp"

namespace gjmslab {

namespace {

constexpr double kExpTol = 1e-9;

double gratio(double a, double b) { return gamma_ratio_real(a, b); }

double fact(int k) { return boost::math::factorial<double>(static_cast<unsigned>(k)); }

double inner(const ZonalFunction& f, const ZonalFunction& g) {
  double s = 0.0;
  int L = std::min(f.L(), g.L());
  for (int l = 0; l <= L; ++l) s += f.coeffs[l] * g.coeffs[l] * mode_norm(f.geometry, l);
  return s;
}

ZonalFunction apply_P(const ZonalFunction& f, double gp) {
  return apply_spectrum(gjms_spectrum(f.geometry, gp, std::max(f.L(), 0)), f);
}

void require_frame(const RhoJet& U) {
  if (std::abs(U.base_exp) > kExpTol) throw DomainError("boundary operators expect a jet starting at rho^0");
}

double max_coeff(const ZonalFunction& f) {
  double m = 0.0;
  for (double c : f.coeffs) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

GammaSplit split_gamma(double gamma) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  GammaSplit s;
  s.floor = static_cast<int>(std::floor(gamma));
  s.frac = gamma - s.floor;
  if (s.frac < 1e-12 || s.frac > 1.0 - 1e-12) throw IntegerGamma("boundary calculus needs non-integer gamma");
  s.half = static_cast<int>(std::floor(gamma / 2.0));
  return s;
}

int default_jet_order(double gamma) { return 2 * split_gamma(gamma).floor + 6; }

BoundaryCoefficients boundary_coeffs(double gamma) {
  BoundaryCoefficients bc;
  bc.gamma = gamma;
  GammaSplit s = split_gamma(gamma);
  bc.split = s;
  const int F = s.floor;
  const double fr = s.frac;

  for (int j = 0; j <= s.half; ++j) {
    double e = gamma - 2 * j, p = 1.0;
    for (int l = 0; l < j; ++l) p *= (e * e - (gamma - 2 * l) * (gamma - 2 * l)) *
                                     (e * e - (gamma + 2 * l - 2 * F) * (gamma + 2 * l - 2 * F));
    bc.b_small.push_back(p);
    bc.b_small_closed.push_back(std::pow(4.0, 2 * j) * fact(j) * gratio(j + 1 - fr, 1 - fr) *
                                gratio(gamma + 1 - j, gamma + 1 - 2 * j) * gratio(F + 1 - j, F + 1 - 2 * j));
  }
  for (int j = 0; j <= s.small_frac_max(); ++j) {
    double e = gamma - 2 * j - 2 * fr, p = 1.0;
    for (int l = 0; l <= j; ++l) p *= e * e - (gamma - 2 * l) * (gamma - 2 * l);
    for (int l = 0; l < j; ++l) p *= e * e - (gamma + 2 * l - 2 * F) * (gamma + 2 * l - 2 * F);
    bc.b_small_frac.push_back(p);
    bc.b_small_frac_closed.push_back(-std::pow(4.0, 2 * j) * fact(j) * gratio(j + 1 + fr, fr) *
                                     gratio(F + 1 - j, F - 2 * j) * gratio(F + 1 - j - fr, F + 1 - 2 * j - fr));
  }
  for (int j = 0; j <= F; ++j) {
    double e = gamma - 2 * j, p = (F % 2) ? -1.0 : 1.0;
    for (int i = 0; i <= F; ++i)
      if (i != j) p *= e * e - (gamma - 2 * i) * (gamma - 2 * i);
    bc.b_large.push_back(p);
  }
  for (int j = 0; j <= F; ++j) {
    bool small = j <= s.half;
    double g = small ? gamma - 2 * j : 2 * j - gamma;
    bc.sigma.push_back(2.0 * g * bc.b_large[j]);
    bc.zeta.push_back(-2.0 * c_gamma_inverse(g) * g * bc.b_large[j]);
    double common = fact(j) * fact(F - j) * gratio(gamma + 1 - j, gamma - 2 * j);
    double sig = std::pow(2.0, 2 * F + 1) * common *
                 (gamma_signed(j + 1 - fr) * reciprocal_gamma(2 * j + 1 - gamma)).to_real();
    bc.sigma_closed.push_back(small ? sig : -sig);
    double z;
    if (small)
      z = std::pow(2.0, 4 * j - 2 * fr + 1) * fact(j) * fact(F - j) * gratio(gamma + 1 - j, gamma + 1 - 2 * j) *
          gratio(j + 1 - fr, gamma - 2 * j);
    else
      z = std::pow(2.0, 4 * gamma - 2 * fr + 1) * fact(j) * fact(F - j) *
          (gamma_signed(gamma + 1 - j) * reciprocal_gamma(2 * j - gamma) * gamma_signed(j + 1 - fr) *
           reciprocal_gamma(2 * j + 1 - gamma))
              .to_real();
    bc.zeta_closed.push_back(z);
    bc.c_gammas[g] = c_gamma(g);
  }
  for (int m = 0; m <= s.small_frac_max(); ++m) {
    double g = F - fr - 2 * m;
    bc.c_gammas[g] = c_gamma(g);
  }
  return bc;
}

void check_boundary_data(const BoundaryData& data, double gamma) {
  GammaSplit s = split_gamma(gamma);
  if (static_cast<int>(data.f2j.size()) != s.half + 1 ||
      static_cast<int>(data.phi2m.size()) != s.small_frac_max() + 1)
    throw RangeError("boundary data lengths do not match the index ranges of gamma");
}

BoundaryData random_boundary_data(const SphereGeometry& geo, double gamma, int L, std::mt19937_64& rng) {
  GammaSplit s = split_gamma(gamma);
  BoundaryData d;
  for (int j = 0; j <= s.half; ++j) d.f2j.push_back(random_band_limited(geo, L, rng));
  for (int m = 0; m <= s.small_frac_max(); ++m) d.phi2m.push_back(random_band_limited(geo, L, rng));
  return d;
}

RhoJet zero_jet(const SphereGeometry& geo, double gamma, int order, int L) {
  return RhoJet(geo, gamma, 0.0, order, L);
}

RhoJet monomial_jet(const ZonalFunction& f, double gamma, double e, int order) {
  RhoJet J = zero_jet(f.geometry, gamma, order, f.L());
  accumulate(J, e, {f});
  return J;
}

ZonalFunction boundary_op_small(const RhoJet& U, int j, Family family) {
  require_frame(U);
  const double gamma = U.gamma;
  GammaSplit s = split_gamma(gamma);
  const int F = s.floor;
  const double h = 0.5 * U.geometry.n;
  int jmax = family == Family::integer ? s.small_int_max() : s.small_frac_max();
  if (j < 0 || j > jmax) throw RangeError("index outside the small range");
  RhoJet W = shift(U, h - gamma);
  double target;
  double b;
  BoundaryCoefficients bc = boundary_coeffs(gamma);
  if (family == Family::integer) {
    for (int l = 0; l < j; ++l) {
      W = jet_factor(W, gamma - 2 * l);
      W = jet_factor(W, gamma + 2 * l - 2 * F);
    }
    target = h - gamma + 2 * j;
    b = bc.b_small[j];
  } else {
    for (int l = 0; l <= j; ++l) W = jet_factor(W, gamma - 2 * l);
    for (int l = 0; l < j; ++l) W = jet_factor(W, gamma + 2 * l - 2 * F);
    target = h - gamma + 2 * j + 2 * s.frac;
    b = bc.b_small_frac[j];
  }
  ZonalFunction out = W.coefficient(target);
  out *= 1.0 / b;
  return out;
}

BoundaryData boundary_data_of(const RhoJet& U) {
  GammaSplit s = split_gamma(U.gamma);
  BoundaryData d;
  for (int j = 0; j <= s.small_int_max(); ++j) d.f2j.push_back(boundary_op_small(U, j, Family::integer));
  for (int m = 0; m <= s.small_frac_max(); ++m) d.phi2m.push_back(boundary_op_small(U, m, Family::fractional));
  return d;
}

RhoJet dirichlet_extend(const BoundaryData& data, double gamma, int order) {
  check_boundary_data(data, gamma);
  GammaSplit s = split_gamma(gamma);
  if (order < 0) order = default_jet_order(gamma);
  const SphereGeometry& geo = data.f2j[0].geometry;
  int L = 0;
  for (const auto& f : data.f2j) L = std::max(L, f.L());
  for (const auto& f : data.phi2m) L = std::max(L, f.L());
  RhoJet U = zero_jet(geo, gamma, order, L);
  const double h = 0.5 * geo.n;
  auto add = [&](const ZonalFunction& f, double gp) {
    ExtensionSeries es = extension_series(f, gp, order);
    accumulate(U, es.exp1 + gamma - h, es.first);
    accumulate(U, es.exp2 + gamma - h, es.second);
  };
  for (int j = 0; j <= s.half; ++j) add(data.f2j[j], gamma - 2 * j);
  for (int m = 0; m <= s.small_frac_max(); ++m) add(data.phi2m[m], s.floor - s.frac - 2 * m);

  BoundaryData back = boundary_data_of(U);
  auto close = [](const ZonalFunction& a, const ZonalFunction& b) {
    ZonalFunction d = a - b;
    return max_coeff(d) <= 1e-9 * std::max(1.0, max_coeff(b));
  };
  for (int j = 0; j <= s.half; ++j)
    if (!close(back.f2j[j], data.f2j[j])) throw ConvergenceError("Dirichlet extension fails its boundary conditions");
  for (int m = 0; m <= s.small_frac_max(); ++m)
    if (!close(back.phi2m[m], data.phi2m[m]))
      throw ConvergenceError("Dirichlet extension fails its boundary conditions");
  return U;
}

RhoJet pi_operator(const RhoJet& W, double gamma, int j) {
  GammaSplit s = split_gamma(gamma);
  RhoJet X = W;
  for (int l = 0; l <= s.floor; ++l)
    if (l != j) X = jet_factor(X, gamma - 2 * l);
  if (s.floor % 2) X *= -1.0;
  return X;
}

namespace {

// extraction part of the large-index operators applied to D (U-frame)
ZonalFunction large_extraction(const RhoJet& D, int j, Family family, int& partner) {
  const double gamma = D.gamma;
  GammaSplit s = split_gamma(gamma);
  const double h = 0.5 * D.geometry.n;
  BoundaryCoefficients bc = boundary_coeffs(gamma);
  RhoJet W = shift(D, h - gamma);
  if (family == Family::integer) {
    if (j < s.half + 1 || j > s.floor) throw RangeError("index outside the large range");
    partner = s.floor - j;
    ZonalFunction out = pi_operator(W, gamma, j).coefficient(h - gamma + 2 * j);
    return out *= 1.0 / bc.b_large[j];
  }
  if (j < s.floor - s.half || j > s.floor) throw RangeError("index outside the large range");
  int i = s.floor - j;
  partner = i;
  ZonalFunction out = pi_operator(W, gamma, i).coefficient(h + gamma - 2 * i);
  return out *= 1.0 / bc.b_large[i];
}

}  // namespace

ZonalFunction boundary_op_large(const RhoJet& U, const RhoJet& Utilde, int j, Family family) {
  require_frame(U);
  int partner = 0;
  ZonalFunction out = large_extraction(U - Utilde, j, family, partner);
  const double gamma = U.gamma;
  if (family == Family::integer) {
    double gp = 2 * j - gamma;
    ZonalFunction B = boundary_op_small(U, partner, Family::fractional);
    out += c_gamma_inverse(gp) * apply_P(B, gp);
  } else {
    double gp = gamma - 2 * partner;
    ZonalFunction B = boundary_op_small(U, partner, Family::integer);
    out += c_gamma_inverse(gp) * apply_P(B, gp);
  }
  return out;
}

ZonalFunction boundary_op_intrinsic(const RhoJet& U, int j, Family family) {
  require_frame(U);
  int partner = 0;
  return large_extraction(U, j, family, partner);
}

// ---------------------------------------------------------------- radial series

double RadialSeries::operator()(double rho) const {
  double A = 1.0 - 0.25 * rho * rho, s = 0.0;
  for (const auto& t : terms) s += t.coef * std::pow(rho, t.e) * std::pow(A, t.q);
  return s;
}

double RadialSeries::derivative(double rho) const {
  double A = 1.0 - 0.25 * rho * rho, s = 0.0;
  for (const auto& t : terms)
    s += t.coef * (t.e * std::pow(rho, t.e - 1) * std::pow(A, t.q) - 0.5 * t.q * std::pow(rho, t.e + 1) * std::pow(A, t.q - 1));
  return s;
}

RadialSeries& RadialSeries::operator*=(double s) {
  for (auto& t : terms) t.coef *= s;
  return *this;
}

RadialSeries combine(const RadialSeries& a, double drop) {
  struct Acc {
    RadialTerm t;
    double mass;
  };
  std::vector<Acc> acc;
  for (const auto& t : a.terms) {
    bool merged = false;
    for (auto& x : acc)
      if (std::abs(x.t.e - t.e) < kExpTol && std::abs(x.t.q - t.q) < kExpTol) {
        x.t.coef += t.coef;
        x.mass += std::abs(t.coef);
        merged = true;
        break;
      }
    if (!merged) acc.push_back({t, std::abs(t.coef)});
  }
  RadialSeries out;
  for (const auto& x : acc)
    if (x.t.coef != 0.0 && std::abs(x.t.coef) > drop * x.mass) out.terms.push_back(x.t);
  return out;
}

RadialSeries product(const RadialSeries& a, const RadialSeries& b) {
  RadialSeries out;
  for (const auto& x : a.terms)
    for (const auto& y : b.terms) out.terms.push_back({x.coef * y.coef, x.e + y.e, x.q + y.q});
  return combine(out);
}

RadialSeries radial_laplacian(const RadialSeries& w, const SphereGeometry& geo, int l) {
  const double n = geo.n, lam = double(l) * (l + n - 1);
  RadialSeries out;
  for (const auto& t : w.terms) {
    double e = t.e, q = t.q, c = t.coef;
    out.terms.push_back({c * (e - 0.5 * n) * (e - 0.5 * n), e, q});
    out.terms.push_back({c * (-0.5 * q * (2 * e + 2 - n) - 0.5 * n * e), e + 2, q - 1});
    out.terms.push_back({c * (0.25 * q * (q - 1) + 0.25 * n * q), e + 4, q - 2});
    out.terms.push_back({-c * lam, e + 2, q - 2});
  }
  return combine(out);
}

RadialSeries radial_factor(const RadialSeries& w, const SphereGeometry& geo, int l, double c) {
  RadialSeries out = radial_laplacian(w, geo, l);
  for (const auto& t : w.terms) out.terms.push_back({-c * c * t.coef, t.e, t.q});
  return combine(out);
}

double radial_pairing(const RadialSeries& u, const RadialSeries& v, const SphereGeometry& geo) {
  const double n = geo.n;
  RadialSeries p = combine(product(u, v), 1e-13);
  long double s = 0.0L;
  for (const auto& t : p.terms) {
    double a = t.e - n - 1, b = t.q + n;
    if (a <= -1.0 || b <= -1.0) throw DomainError("radial pairing diverges");
    s += static_cast<long double>(t.coef) * std::pow(2.0, a) * boost::math::beta((a + 1) / 2, b + 1);
  }
  return static_cast<double>(s);
}

void check_perturbation(const Perturbation& p, double gamma) {
  GammaSplit s = split_gamma(gamma);
  const double h = 0.5 * p.h.geometry.n;
  for (const auto& t : p.w.terms) {
    double u = t.e + gamma - h;
    double k1 = u / 2, k2 = (u - 2 * s.frac) / 2;
    bool ok1 = std::abs(k1 - std::round(k1)) < kExpTol && std::round(k1) >= s.half + 1;
    bool ok2 = std::abs(k2 - std::round(k2)) < kExpTol && std::round(k2) >= s.floor - s.half;
    if (!ok1 && !ok2) throw DomainError("perturbation exponent would change the small-index boundary data");
  }
}

RhoJet perturbation_jet(const Perturbation& p, double gamma, int order) {
  check_perturbation(p, gamma);
  const double h = 0.5 * p.h.geometry.n;
  RhoJet J = zero_jet(p.h.geometry, gamma, order, p.h.L());
  for (const auto& t : p.w.terms) {
    std::vector<ZonalFunction> coeffs;
    double binom = 1.0, p4 = 1.0;
    for (int i = 0; i <= order; ++i) {
      coeffs.push_back(t.coef * binom * p4 * p.h);
      binom *= (t.q - i) / (i + 1);
      p4 *= -0.25;
    }
    accumulate(J, t.e + gamma - h, coeffs);
  }
  return J;
}

BallField make_field(const BoundaryData& data, double gamma, int order, std::optional<Perturbation> perturbation) {
  BallField F;
  F.jet = dirichlet_extend(data, gamma, order);
  if (perturbation) {
    F.jet += perturbation_jet(*perturbation, gamma, F.jet.order);
    F.perturbation = std::move(perturbation);
  }
  return F;
}

bool is_polyharmonic(const RhoJet& U, double tol) {
  RhoJet Ut = dirichlet_extend(boundary_data_of(U), U.gamma, U.order);
  return (U - Ut).max_abs() <= tol * std::max(1.0, U.max_abs());
}

double interior_energy(const Perturbation& a, const Perturbation& b, double gamma) {
  GammaSplit s = split_gamma(gamma);
  const SphereGeometry& geo = a.h.geometry;
  double total = 0.0;
  int L = std::min(a.h.L(), b.h.L());
  for (int l = 0; l <= L; ++l) {
    double w = a.h.coeffs[l] * b.h.coeffs[l];
    if (w == 0.0) continue;
    RadialSeries Lw = b.w;
    for (int k = 0; k <= s.floor; ++k) Lw = radial_factor(Lw, geo, l, gamma - 2 * k);
    if (s.floor % 2 == 0) Lw *= -1.0;
    total += w * mode_norm(geo, l) * radial_pairing(a.w, Lw, geo);
  }
  return total;
}

double zeta_form(const RhoJet& U, const RhoJet& V) {
  const double gamma = U.gamma;
  GammaSplit s = split_gamma(gamma);
  BoundaryCoefficients bc = boundary_coeffs(gamma);
  BoundaryData du = boundary_data_of(U), dv = boundary_data_of(V);
  double q = 0.0;
  for (int j = 0; j <= s.half; ++j) q += bc.zeta[j] * energy_form(du.f2j[j], dv.f2j[j], gamma - 2 * j);
  for (int j = s.half + 1; j <= s.floor; ++j)
    q += bc.zeta[j] * energy_form(du.phi2m[s.floor - j], dv.phi2m[s.floor - j], 2 * j - gamma);
  return q;
}

double sigma_form(const RhoJet& U, const RhoJet& V) {
  const double gamma = U.gamma;
  GammaSplit s = split_gamma(gamma);
  BoundaryCoefficients bc = boundary_coeffs(gamma);
  double q = 0.0;
  for (int j = 0; j <= s.half; ++j)
    q -= bc.sigma[j] * inner(boundary_op_small(U, j, Family::integer),
                             boundary_op_intrinsic(V, s.floor - j, Family::fractional));
  for (int j = s.half + 1; j <= s.floor; ++j)
    q -= bc.sigma[j] * inner(boundary_op_intrinsic(V, j, Family::integer),
                             boundary_op_small(U, s.floor - j, Family::fractional));
  return q;
}

FormReport dirichlet_form_report(const BallField& U, const BallField& V) {
  if (std::abs(U.jet.gamma - V.jet.gamma) > 1e-14 || U.jet.order != V.jet.order)
    throw DomainError("fields need the same gamma and jet order");
  FormReport r;
  r.zeta_form = zeta_form(U.jet, V.jet);
  bool poly_v = !V.perturbation && is_polyharmonic(V.jet);
  bool poly_u = !U.perturbation && is_polyharmonic(U.jet);
  if (poly_v) {
    r.sigma_form = sigma_form(U.jet, V.jet);
    r.value = r.sigma_form;
    r.route = "boundary";
  } else if (poly_u) {
    r.sigma_form = std::nan("");
    r.value = r.zeta_form;
    r.route = "energy";
  } else if (U.perturbation && V.perturbation) {
    r.sigma_form = std::nan("");
    r.interior = interior_energy(*U.perturbation, *V.perturbation, U.jet.gamma);
    r.value = r.interior + r.zeta_form;
    r.route = "energy+interior";
  } else {
    throw NotPolyharmonic("interior term needs global perturbation profiles");
  }
  return r;
}

double dirichlet_form(const BallField& U, const BallField& V) { return dirichlet_form_report(U, V).value; }

// ---------------------------------------------------------------- global checks

namespace {

RadialSeries radial_derivative(const RadialSeries& w) {
  RadialSeries out;
  for (const auto& t : w.terms) {
    out.terms.push_back({t.coef * t.e, t.e - 1, t.q});
    out.terms.push_back({-0.5 * t.coef * t.q, t.e + 1, t.q - 1});
  }
  return combine(out);
}

RadialSeries times_weight(RadialSeries w, double de, double dq) {
  for (auto& t : w.terms) {
    t.e += de;
    t.q += dq;
  }
  return w;
}

// Expands A^q = sum binom(q,i) (-rho^2/4)^i far enough to read off the limit at rho = 0.
double limit_at_zero(const RadialSeries& w) {
  RadialSeries ex;
  for (const auto& t : w.terms) {
    double binom = 1.0, p4 = 1.0;
    for (int i = 0; t.e + 2 * i <= 1e-9; ++i) {
      ex.terms.push_back({t.coef * binom * p4, t.e + 2 * i, 0.0});
      binom *= (t.q - i) / (i + 1);
      p4 *= -0.25;
    }
  }
  RadialSeries c = combine(ex, 1e-12);
  double lim = 0.0;
  for (const auto& t : c.terms) {
    if (t.e < -kExpTol) throw DomainError("boundary term diverges");
    lim += t.coef;
  }
  return lim;
}

}  // namespace

GreenReport green_identity_check(const RadialMode& U, const RadialMode& V, const SphereGeometry& geo) {
  const double n = geo.n;
  RadialSeries a = product(U.w, radial_laplacian(V.w, geo, V.l));
  RadialSeries b = product(V.w, radial_laplacian(U.w, geo, U.l));
  RadialSeries d = a;
  for (auto t : b.terms) d.terms.push_back({-t.coef, t.e, t.q});
  d = combine(times_weight(d, -n - 1, n), 1e-12);
  for (const auto& t : d.terms)
    if (t.e <= -1.0 + kExpTol || t.q <= -1.0) throw DomainError("interior integral diverges");

  // angular factor by quadrature on the sphere grid
  int M = std::max(U.l, V.l) + 4;
  ZonalGrid g = make_grid(geo, M);
  double ang = 0.0;
  for (size_t i = 0; i < g.t.size(); ++i) ang += g.w[i] * basis_eval(geo, U.l, g.t[i]) * basis_eval(geo, V.l, g.t[i]);

  boost::math::quadrature::tanh_sinh<double> ts(15);
  GreenReport r;
  double err = 0.0, l1 = 0.0;
  double radial = ts.integrate([&d](double rho) { return d(rho); }, 0.0, 2.0, 1e-13, &err, &l1);
  r.interior = radial * ang;
  r.quadrature_error = err * l1 * std::abs(ang);

  RadialSeries flux = product(U.w, radial_derivative(V.w));
  for (auto t : product(V.w, radial_derivative(U.w)).terms) flux.terms.push_back({-t.coef, t.e, t.q});
  flux = combine(times_weight(flux, 1 - n, n), 1e-12);
  r.boundary = limit_at_zero(flux) * ang;
  r.residual = std::abs(r.interior + r.boundary);
  return r;
}

DeficitReport hardy_check(const HardyProfile& V, const SphereGeometry& geo) {
  const double n = geo.n, lam = double(V.l) * (V.l + n - 1), norm = mode_norm(geo, V.l);
  boost::math::quadrature::tanh_sinh<double> ts(15);
  auto om = [](double x, double xc) { return x > 0.5 ? xc : 1.0 - x; };
  auto grad = [&](double x, double xc) {
    double c = om(x, xc);
    if (!(c > 0.0)) return 0.0;
    double v = V.v(x, c), dv = V.dv(x, c);
    double s = dv * dv;
    if (lam != 0.0) s += lam * v * v / (x * x);
    return s * std::pow(x, n);
  };
  auto hardy = [&](double x, double xc) {
    double c = om(x, xc);
    if (!(c > 0.0)) return 0.0;
    double v = V.v(x, c), q = c * (1.0 + x);
    double ratio = v / q;
    return ratio * ratio * std::pow(x, n);
  };
  double g = norm * ts.integrate(grad, 0.0, 1.0, 1e-12);
  double h = norm * ts.integrate(hardy, 0.0, 1.0, 1e-12);
  DeficitReport r = make_report("hardy", g, h);
  r.n = geo.n;
  return r;
}

// ---------------------------------------------------------------- trace inequalities

std::string trace_case_label(const SphereGeometry& geo, double gamma) {
  GammaSplit s = split_gamma(gamma);
  const double h = 0.5 * geo.n;
  if (gamma < h) return "subcritical";
  bool resonant = geo.n % 2 == 1 && std::abs(s.frac - 0.5) < 1e-12;
  if (!resonant) return "case II";
  double d = (gamma - h) / 2.0;
  if (std::abs(d - std::round(d)) < 1e-12 && d > -1e-12) return "case I(1)";
  throw UnimplementedCase("case I(2): logarithmic term at the large index j2 - 1");
}

DeficitReport trace_deficit(const BoundaryData& data, double gamma, const SphereGeometry& geo, int order) {
  std::string label = trace_case_label(geo, gamma);
  check_boundary_data(data, gamma);
  GammaSplit s = split_gamma(gamma);
  BoundaryCoefficients bc = boundary_coeffs(gamma);
  const double h = 0.5 * geo.n;
  const int j1 = static_cast<int>(std::floor(gamma / 2 - geo.n / 4.0));
  const int j2 = static_cast<int>(std::floor(gamma / 2 + geo.n / 4.0)) + 1;
  const bool beckner = label == "case I(1)";

  auto must_vanish = [&](const ZonalFunction& f, const char* what) {
    if (max_coeff(f) > 0.0) throw UnimplementedCase(std::string("data outside the admissible class: ") + what);
  };
  auto must_be_positive = [&](const ZonalFunction& f) {
    if (!(grid_min(f) > 0.0)) throw UnimplementedCase("data outside the admissible class: reverse term needs positive data");
  };
  auto sobolev_rhs = [&](const ZonalFunction& f, double gp) {
    if (max_coeff(f) == 0.0) return 0.0;
    try {
      check_sobolev_gamma(geo, gp);
    } catch (const UnsupportedGamma&) {
      throw UnimplementedCase("sharp inequality of order " + std::to_string(2 * gp) + " not available");
    }
    return sobolev_deficit(f, gp).rhs;
  };

  double rhs = 0.0;
  for (int j = 0; j <= s.half; ++j) {
    const ZonalFunction& f = data.f2j[j];
    double gp = gamma - 2 * j;
    if (j < j1) {
      must_vanish(f, "low-index data must vanish");
      continue;
    }
    if (beckner && j == j1) {
      rhs += 2.0 * std::tgamma(geo.n + 1.0) * geo.volume * bc.zeta[j] * beckner_deficit(f).rhs;
      continue;
    }
    if (gp > h) must_be_positive(f);
    rhs += bc.zeta[j] * sobolev_rhs(f, gp);
  }
  const double rhs_small = rhs;
  int jtop = beckner ? j2 - 1 : j2;
  for (int j = s.half + 1; j <= s.floor; ++j) {
    const ZonalFunction& f = data.phi2m[s.floor - j];
    double gp = 2 * j - gamma;
    if (j > jtop) {
      must_vanish(f, "high-index data must vanish");
      continue;
    }
    if (gp > h) must_be_positive(f);
    rhs += bc.zeta[j] * sobolev_rhs(f, gp);
  }

  RhoJet U = dirichlet_extend(data, gamma, order);
  double q = sigma_form(U, U);
  DeficitReport r = make_report("trace", q, rhs);
  r.n = geo.n;
  r.gamma = gamma;
  r.extras["zeta_form"] = zeta_form(U, U);
  r.extras["j1"] = j1;
  r.extras["j2"] = j2;
  r.extras["rhs_small"] = rhs_small;
  r.extras["rhs_large"] = rhs - rhs_small;
  // no index in (floor(gamma/2), min(jtop, floor(gamma))]
  r.extras["large_range_empty"] = std::min(jtop, s.floor) < s.half + 1 ? 1.0 : 0.0;
  return r;
}

// ---------------------------------------------------------------- conformal covariance

double conformal_covariance_check(const RhoJet& U, const std::vector<ZonalFunction>& tau, int j, Family family) {
  require_frame(U);
  GammaSplit s = split_gamma(U.gamma);
  int jmax = family == Family::integer ? s.small_int_max() : s.small_frac_max();
  if (j < 0 || j > jmax) throw RangeError("covariance is checked for small indices only");
  if (tau.empty()) throw DomainError("empty conformal factor");
  const SphereGeometry& geo = U.geometry;
  const double h = 0.5 * geo.n;
  const double c1 = h - U.gamma;
  const double c2 = -h + U.gamma - 2 * j - (family == Family::fractional ? 2 * s.frac : 0.0);
  const int K = U.order;
  const int LE = 32;
  const int L_out = U.L() + LE;

  // spectral route: exp series of c1 tau by E' = c1 T' E in x = rho^2
  std::vector<ZonalFunction> E(K + 1);
  E[0] = project([&](double t) { return std::exp(c1 * tau[0](t)); }, geo, LE);
  for (int m = 1; m <= K; ++m) {
    ZonalFunction acc(geo, LE);
    for (int k = 1; k <= m && k < static_cast<int>(tau.size()); ++k) acc += double(k) * multiply(tau[k], E[m - k], LE);
    E[m] = (c1 / m) * acc;
  }
  RhoJet V = multiply_even(E, U, L_out);
  ZonalFunction B = boundary_op_small(V, j, family);
  ZonalFunction lhs = multiply(project([&](double t) { return std::exp(c2 * tau[0](t)); }, geo, LE), B, L_out);

  // pointwise route on a fine grid
  ZonalGrid g = make_grid(geo, L_out + 8);
  size_t N = g.t.size();
  std::vector<std::vector<double>> tv(tau.size()), ev(K + 1, std::vector<double>(N, 0.0));
  for (size_t k = 0; k < tau.size(); ++k) tv[k] = synthesize(tau[k], g);
  for (size_t i = 0; i < N; ++i) {
    ev[0][i] = std::exp(c1 * tv[0][i]);
    for (int m = 1; m <= K; ++m) {
      double acc = 0.0;
      for (int k = 1; k <= m && k < static_cast<int>(tau.size()); ++k) acc += k * tv[k][i] * ev[m - k][i];
      ev[m][i] = c1 / m * acc;
    }
  }
  RhoJet V2(geo, U.gamma, 0.0, U.order, L_out);
  for (int b = 1; b <= 2; ++b)
    for (int m = 0; m <= U.order; ++m) {
      std::vector<double> vals(N, 0.0);
      for (int a = 0; a <= m; ++a) {
        auto uv = synthesize(U.at(b, m - a), g);
        for (size_t i = 0; i < N; ++i) vals[i] += ev[a][i] * uv[i];
      }
      V2.at(b, m) = analyze(vals, g, geo, L_out);
    }
  auto B2 = synthesize(boundary_op_small(V2, j, family), g);
  auto l1 = synthesize(lhs, g);
  double diff = 0.0, scale = 0.0;
  for (size_t i = 0; i < N; ++i) {
    double rhs = std::exp(c2 * tv[0][i]) * B2[i];
    diff = std::max(diff, std::abs(rhs - l1[i]));
    scale = std::max(scale, std::abs(rhs));
  }
  return diff / std::max(scale, 1e-300);
}

}  // namespace gjmslab
