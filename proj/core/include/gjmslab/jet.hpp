#pragma once

#include <vector>

#include "gjmslab/zonal.hpp"

namespace gjmslab {

// Two-branch truncated expansion in the defining function rho:
//   sum_m branch1[m] rho^{base + 2m} + sum_m branch2[m] rho^{base + 2[gamma] + 2m},  m = 0..order.
struct RhoJet {
  SphereGeometry geometry;
  double gamma = 0.5;
  double base_exp = 0.0;
  int order = 0;
  std::vector<ZonalFunction> branch1;
  std::vector<ZonalFunction> branch2;

  RhoJet() = default;
  RhoJet(const SphereGeometry& geo, double gamma, double base, int order, int L);

  double offset() const;  // 2[gamma]
  double exponent(int branch, int m) const;
  int L() const;
  // Branch (1 or 2) and index of rho^e; false if e is not on the lattice or beyond the order.
  bool locate(double e, int& branch, int& m) const;
  ZonalFunction& at(int branch, int m) { return branch == 1 ? branch1[m] : branch2[m]; }
  const ZonalFunction& at(int branch, int m) const { return branch == 1 ? branch1[m] : branch2[m]; }
  // coefficient of rho^e; RangeError when e is not representable
  const ZonalFunction& coefficient(double e) const;

  double max_abs() const;

  RhoJet& operator+=(const RhoJet& o);
  RhoJet& operator-=(const RhoJet& o);
  RhoJet& operator*=(double s);
};

RhoJet operator+(RhoJet a, const RhoJet& b);
RhoJet operator-(RhoJet a, const RhoJet& b);
RhoJet operator*(double s, RhoJet a);

// rho^c U
RhoJet shift(RhoJet U, double c);
// Adds sum_m coeffs[m] rho^{e + 2m}; terms beyond the jet order are dropped.
void accumulate(RhoJet& U, double e, const std::vector<ZonalFunction>& coeffs);
// Exact truncated action of the shifted ball Laplacian Delta_+ + n^2/4.
RhoJet jet_laplacian(const RhoJet& U);
// (Delta_+ + n^2/4 - c^2) U
RhoJet jet_factor(const RhoJet& U, double c);
// E U where E = sum_m even[m] rho^{2m}; products re-analyzed at degree L_out.
RhoJet multiply_even(const std::vector<ZonalFunction>& even, const RhoJet& U, int L_out = -1);

}  // namespace gjmslab
