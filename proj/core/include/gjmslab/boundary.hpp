#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gjmslab/inequalities.hpp"
#include "gjmslab/jet.hpp"
#include "gjmslab/scattering.hpp"

namespace gjmslab {

enum class Family { integer, fractional };

struct GammaSplit {
  int floor = 0;      // floor(gamma)
  double frac = 0.0;  // [gamma]
  int half = 0;       // floor(gamma / 2)
  int small_int_max() const { return half; }
  int small_frac_max() const { return floor - half - 1; }
};
GammaSplit split_gamma(double gamma);

int default_jet_order(double gamma);

struct BoundaryCoefficients {
  double gamma = 0.0;
  GammaSplit split;
  // normalization products making B(rho^{2j}) = 1 and B(rho^{2j+2[gamma]}) = 1 for small indices
  std::vector<double> b_small;
  std::vector<double> b_small_frac;
  // closed Gamma forms of the same two families
  std::vector<double> b_small_closed;
  std::vector<double> b_small_frac_closed;
  // (-1)^{floor} prod_{i != j} ((gamma-2j)^2 - (gamma-2i)^2), j = 0..floor
  std::vector<double> b_large;
  std::vector<double> sigma;  // from the b products
  std::vector<double> zeta;
  std::vector<double> sigma_closed;
  std::vector<double> zeta_closed;
  std::map<double, double> c_gammas;
};
BoundaryCoefficients boundary_coeffs(double gamma);

struct BoundaryData {
  std::vector<ZonalFunction> f2j;    // j = 0..floor(gamma/2)
  std::vector<ZonalFunction> phi2m;  // m = 0..floor(gamma)-floor(gamma/2)-1
};
void check_boundary_data(const BoundaryData& data, double gamma);
BoundaryData random_boundary_data(const SphereGeometry& geo, double gamma, int L, std::mt19937_64& rng);

// Jet of U in the frame where the U expansion starts at rho^0 and rho^{2[gamma]}.
RhoJet zero_jet(const SphereGeometry& geo, double gamma, int order, int L);
// rho^{e} f as a U-frame jet
RhoJet monomial_jet(const ZonalFunction& f, double gamma, double e, int order);

ZonalFunction boundary_op_small(const RhoJet& U, int j, Family family);
BoundaryData boundary_data_of(const RhoJet& U);

RhoJet dirichlet_extend(const BoundaryData& data, double gamma, int order = -1);

// (-1)^{floor} prod_{l != j} (Delta - (gamma - 2l)^2) on a jet
RhoJet pi_operator(const RhoJet& W, double gamma, int j);
// Large-index operators; j is the index in the family: B_{2j} or B_{2j+2[gamma]}.
ZonalFunction boundary_op_large(const RhoJet& U, const RhoJet& Utilde, int j, Family family);
// Extraction from Pi applied to U itself; equals boundary_op_large when U is polyharmonic.
ZonalFunction boundary_op_intrinsic(const RhoJet& U, int j, Family family);

// Global radial profiles sum c rho^e (1 - rho^2/4)^q.
struct RadialTerm {
  double coef = 0.0;
  double e = 0.0;
  double q = 0.0;
};
struct RadialSeries {
  std::vector<RadialTerm> terms;
  double operator()(double rho) const;
  double derivative(double rho) const;
  RadialSeries& operator*=(double s);
};
RadialSeries combine(const RadialSeries& a, double drop = 0.0);
RadialSeries product(const RadialSeries& a, const RadialSeries& b);
// Delta_+ + n^2/4 acting on w(rho) B_l(t), returned as the radial factor
RadialSeries radial_laplacian(const RadialSeries& w, const SphereGeometry& geo, int l);
RadialSeries radial_factor(const RadialSeries& w, const SphereGeometry& geo, int l, double c);
// int_0^2 u v rho^{-n-1} (1 - rho^2/4)^n drho, exact
double radial_pairing(const RadialSeries& u, const RadialSeries& v, const SphereGeometry& geo);

// W = rho^{n/2-gamma}(U - Utilde) = w(rho) h(t)
struct Perturbation {
  RadialSeries w;
  ZonalFunction h;
};
void check_perturbation(const Perturbation& p, double gamma);
RhoJet perturbation_jet(const Perturbation& p, double gamma, int order);

struct BallField {
  RhoJet jet;
  std::optional<Perturbation> perturbation;
};
BallField make_field(const BoundaryData& data, double gamma, int order = -1,
                     std::optional<Perturbation> perturbation = std::nullopt);
bool is_polyharmonic(const RhoJet& U, double tol = 1e-10);

// int W L^+ W' over the ball with the hyperbolic volume
double interior_energy(const Perturbation& a, const Perturbation& b, double gamma);
// sum zeta int B P B
double zeta_form(const RhoJet& U, const RhoJet& V);
// -sum sigma int B B with large indices of V taken intrinsically; valid for polyharmonic V
double sigma_form(const RhoJet& U, const RhoJet& V);

struct FormReport {
  double value = 0.0;
  double sigma_form = 0.0;
  double zeta_form = 0.0;
  double interior = 0.0;
  std::string route;
};
FormReport dirichlet_form_report(const BallField& U, const BallField& V);
double dirichlet_form(const BallField& U, const BallField& V);

struct RadialMode {
  RadialSeries w;
  int l = 0;
};
struct GreenReport {
  double interior = 0.0;
  double boundary = 0.0;
  double residual = 0.0;
  double quadrature_error = 0.0;
};
GreenReport green_identity_check(const RadialMode& U, const RadialMode& V, const SphereGeometry& geo);

// V(x) = v(|x|) B_l; v and dv take (r, 1 - r).
struct HardyProfile {
  std::function<double(double, double)> v;
  std::function<double(double, double)> dv;
  int l = 0;
};
DeficitReport hardy_check(const HardyProfile& V, const SphereGeometry& geo);

DeficitReport trace_deficit(const BoundaryData& data, double gamma, const SphereGeometry& geo, int order = -1);
std::string trace_case_label(const SphereGeometry& geo, double gamma);

// Residual between the hatted operator and the transformed one for rho-hat = e^tau rho.
double conformal_covariance_check(const RhoJet& U, const std::vector<ZonalFunction>& tau, int j, Family family);

}  // namespace gjmslab
