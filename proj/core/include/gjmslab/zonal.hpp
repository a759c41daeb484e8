#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "gjmslab/specfun.hpp"

namespace gjmslab {

constexpr int kDefaultModes = 64;
constexpr int kDefaultGrid = 256;
constexpr int kDefaultCircleGrid = 512;

struct SphereGeometry {
  int n = 2;
  double mu = 0.5;
  double volume = 0.0;           // |S^n|
  double boundary_volume = 0.0;  // |S^{n-1}|, equals 2 for n = 1

  SphereGeometry() : SphereGeometry(2) {}
  explicit SphereGeometry(int dim);
  bool operator==(const SphereGeometry& o) const { return n == o.n; }
};

double sphere_volume(int n);

// Samples of a zonal function at latitudes t_i; weights already include |S^{n-1}|.
struct ZonalGrid {
  int n = 0;
  double weight_exponent = 0.0;
  int order = 0;
  std::vector<double> t;
  std::vector<double> w;
};

// Gauss-Gegenbauer grid for n >= 2, Chebyshev midpoint grid (uniform in theta) for n = 1.
ZonalGrid make_grid(const SphereGeometry& geo, int M);
ZonalGrid make_grid(const SphereGeometry& geo);
ZonalGrid make_grid(const SphereGeometry& geo, const QuadratureRule& rule);
int default_grid_size(const SphereGeometry& geo);

// Zonal basis: C_l^mu for n >= 2, cos(l theta) = T_l(t) for n = 1.
double basis_eval(const SphereGeometry& geo, int l, double t);
void basis_all(const SphereGeometry& geo, int L, double t, double* out);
// integral of B_l^2 over S^n
double mode_norm(const SphereGeometry& geo, int l);

struct ZonalFunction {
  SphereGeometry geometry;
  std::vector<double> coeffs;

  ZonalFunction() = default;
  ZonalFunction(const SphereGeometry& geo, int L) : geometry(geo), coeffs(L + 1, 0.0) {}
  ZonalFunction(const SphereGeometry& geo, std::vector<double> c) : geometry(geo), coeffs(std::move(c)) {}

  static ZonalFunction constant(const SphereGeometry& geo, double c, int L = 0);
  static ZonalFunction mode(const SphereGeometry& geo, int l, double amp = 1.0, int L = -1);

  int L() const { return static_cast<int>(coeffs.size()) - 1; }
  double operator()(double t) const;
  double mode_l2(int l) const;
  double l2_squared() const;
  double mean() const { return coeffs.empty() ? 0.0 : coeffs[0]; }
  ZonalFunction truncated(int L) const;

  ZonalFunction& operator+=(const ZonalFunction& o);
  ZonalFunction& operator-=(const ZonalFunction& o);
  ZonalFunction& operator*=(double s);
};

ZonalFunction operator+(ZonalFunction a, const ZonalFunction& b);
ZonalFunction operator-(ZonalFunction a, const ZonalFunction& b);
ZonalFunction operator*(double s, ZonalFunction a);
ZonalFunction operator*(ZonalFunction a, double s);

std::vector<double> synthesize(const ZonalFunction& f, const ZonalGrid& grid);
ZonalFunction analyze(const std::vector<double>& values, const ZonalGrid& grid, const SphereGeometry& geo, int L);

struct AnalysisReport {
  ZonalFunction f;
  int resolvable_degree = 0;  // highest degree the grid can separate
  double tail_energy = 0.0;   // energy in modes L+1..resolvable_degree
  double relative_tail = 0.0;
  bool certified = false;
  std::string warning;
};
AnalysisReport analyze_with_report(const std::vector<double>& values, const ZonalGrid& grid,
                                   const SphereGeometry& geo, int L, double tail_threshold = 1e-20);

// Sample a callable at the grid and analyze.
ZonalFunction project(const std::function<double(double)>& F, const SphereGeometry& geo, int L, int M = 0);
AnalysisReport project_with_report(const std::function<double(double)>& F, const SphereGeometry& geo, int L, int M = 0);

double integrate(const std::vector<double>& values, const ZonalGrid& grid, const SphereGeometry& geo);
double integrate(const std::function<double(double)>& F, const SphereGeometry& geo, int M = 0);
double lp_norm(const std::vector<double>& values, const ZonalGrid& grid, const SphereGeometry& geo, double p);

struct NormRefinement {
  double coarse = 0.0;  // grid M
  double fine = 0.0;    // grid 2M
  int M = 0;
  double value() const { return fine; }
  double spread() const;
};
NormRefinement lp_norm_refined(const std::function<double(double)>& F, const SphereGeometry& geo, double p, int M = 0);
NormRefinement lp_norm_refined(const ZonalFunction& f, double p, int M = 0);

// Pointwise product, re-analyzed at degree L_out.
ZonalFunction multiply(const ZonalFunction& a, const ZonalFunction& b, int L_out = -1);

// Random band-limited f with coefficients ~ N(0,1)/(1+l)^decay.
ZonalFunction random_band_limited(const SphereGeometry& geo, int L, std::mt19937_64& rng, double decay = 1.5);
// Random f = 1 + q with min f >= floor > 0 checked on a fine grid, scaled to unit L^2 norm.
ZonalFunction random_positive(const SphereGeometry& geo, int L, std::mt19937_64& rng, double floor = 0.05);
double grid_min(const ZonalFunction& f, int M = 0);

void write_samples_csv(std::ostream& os, const std::vector<double>& t, const std::vector<double>& values);
void read_samples_csv(std::istream& is, std::vector<double>& t, std::vector<double>& values);
void write_coeffs_csv(std::ostream& os, const ZonalFunction& f);
ZonalFunction read_coeffs_csv(std::istream& is, const SphereGeometry& geo);

}  // namespace gjmslab
