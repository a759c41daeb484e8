#include "gjmslab/jet.hpp"

#include <algorithm>
#include <cmath>

#include "gjmslab/errors.hpp"

namespace gjmslab {

namespace {

constexpr double kLatticeTol = 1e-9;

double frac_part(double g) { return g - std::floor(g); }

void check_aligned(const RhoJet& a, const RhoJet& b) {
  if (!(a.geometry == b.geometry)) throw GridMismatch("jets on different spheres");
  if (std::abs(a.gamma - b.gamma) > 1e-14 || std::abs(a.base_exp - b.base_exp) > 1e-12 || a.order != b.order)
    throw DomainError("misaligned jets");
}

}  // namespace

RhoJet::RhoJet(const SphereGeometry& geo, double g, double base, int M, int L)
    : geometry(geo), gamma(g), base_exp(base), order(M) {
  if (M < 0) throw RangeError("negative jet order");
  double fr = frac_part(g);
  if (fr < kLatticeTol || fr > 1.0 - kLatticeTol) throw IntegerGamma("jet branches coincide for integer gamma");
  branch1.assign(M + 1, ZonalFunction(geo, L));
  branch2.assign(M + 1, ZonalFunction(geo, L));
}

double RhoJet::offset() const { return 2.0 * frac_part(gamma); }

double RhoJet::exponent(int branch, int m) const { return base_exp + (branch == 2 ? offset() : 0.0) + 2.0 * m; }

int RhoJet::L() const {
  int L = 0;
  for (const auto& z : branch1) L = std::max(L, z.L());
  for (const auto& z : branch2) L = std::max(L, z.L());
  return L;
}

bool RhoJet::locate(double e, int& branch, int& m) const {
  for (int b = 1; b <= 2; ++b) {
    double k = (e - exponent(b, 0)) / 2.0;
    double r = std::round(k);
    if (std::abs(k - r) < kLatticeTol && r >= 0 && r <= order) {
      branch = b;
      m = static_cast<int>(r);
      return true;
    }
  }
  return false;
}

const ZonalFunction& RhoJet::coefficient(double e) const {
  int b = 0, m = 0;
  if (!locate(e, b, m)) throw RangeError("exponent not representable in jet");
  return at(b, m);
}

double RhoJet::max_abs() const {
  double mx = 0.0;
  for (const auto* br : {&branch1, &branch2})
    for (const auto& z : *br)
      for (double c : z.coeffs) mx = std::max(mx, std::abs(c));
  return mx;
}

RhoJet& RhoJet::operator+=(const RhoJet& o) {
  check_aligned(*this, o);
  for (int m = 0; m <= order; ++m) {
    branch1[m] += o.branch1[m];
    branch2[m] += o.branch2[m];
  }
  return *this;
}

RhoJet& RhoJet::operator-=(const RhoJet& o) {
  check_aligned(*this, o);
  for (int m = 0; m <= order; ++m) {
    branch1[m] -= o.branch1[m];
    branch2[m] -= o.branch2[m];
  }
  return *this;
}

RhoJet& RhoJet::operator*=(double s) {
  for (auto& z : branch1) z *= s;
  for (auto& z : branch2) z *= s;
  return *this;
}

RhoJet operator+(RhoJet a, const RhoJet& b) { return a += b; }
RhoJet operator-(RhoJet a, const RhoJet& b) { return a -= b; }
RhoJet operator*(double s, RhoJet a) { return a *= s; }

RhoJet shift(RhoJet U, double c) {
  U.base_exp += c;
  return U;
}

void accumulate(RhoJet& U, double e, const std::vector<ZonalFunction>& coeffs) {
  int b = 0, m0 = 0;
  // the lattice may start below the jet's base only if every term is dropped
  for (size_t k = 0; k < coeffs.size(); ++k) {
    double ek = e + 2.0 * k;
    if (U.locate(ek, b, m0)) {
      U.at(b, m0) += coeffs[k];
      continue;
    }
    bool on_lattice = false;
    for (int br = 1; br <= 2; ++br) {
      double q = (ek - U.exponent(br, 0)) / 2.0;
      if (std::abs(q - std::round(q)) < kLatticeTol) {
        on_lattice = true;
        if (q < -0.5) throw RangeError("series starts below the jet base exponent");
      }
    }
    if (!on_lattice) throw DomainError("misaligned jets");
  }
}

RhoJet jet_laplacian(const RhoJet& U) {
  const int n = U.geometry.n;
  const double half_n = 0.5 * n;
  RhoJet out = U;
  int L = U.L();
  std::vector<double> lap(L + 1);
  for (int l = 0; l <= L; ++l) lap[l] = -double(l) * (l + n - 1);
  for (int b = 1; b <= 2; ++b) {
    const auto& h = b == 1 ? U.branch1 : U.branch2;
    auto& o = b == 1 ? out.branch1 : out.branch2;
    double beta = U.exponent(b, 0);
    for (int m = 0; m <= U.order; ++m) {
      ZonalFunction acc(U.geometry, L);
      double lead = beta + 2 * m - half_n;
      for (int l = 0; l <= h[m].L(); ++l) acc.coeffs[l] = lead * lead * h[m].coeffs[l];
      double p4 = 1.0;
      for (int k = 1; k <= m; ++k) {
        const ZonalFunction& hk = h[m - k];
        double a = -(beta + 2 * (m - k)) * half_n;
        for (int l = 0; l <= hk.L(); ++l) acc.coeffs[l] += p4 * (a + k * lap[l]) * hk.coeffs[l];
        p4 *= 0.25;
      }
      o[m] = acc;
    }
  }
  return out;
}

RhoJet jet_factor(const RhoJet& U, double c) {
  RhoJet out = jet_laplacian(U);
  for (int m = 0; m <= U.order; ++m) {
    out.branch1[m] -= c * c * U.branch1[m];
    out.branch2[m] -= c * c * U.branch2[m];
  }
  return out;
}

RhoJet multiply_even(const std::vector<ZonalFunction>& even, const RhoJet& U, int L_out) {
  if (L_out < 0) {
    int Le = 0;
    for (const auto& z : even) Le = std::max(Le, z.L());
    L_out = U.L() + Le;
  }
  RhoJet out(U.geometry, U.gamma, U.base_exp, U.order, L_out);
  for (int m = 0; m <= U.order; ++m)
    for (int a = 0; a <= m && a < static_cast<int>(even.size()); ++a) {
      out.branch1[m] += multiply(even[a], U.branch1[m - a], L_out);
      out.branch2[m] += multiply(even[a], U.branch2[m - a], L_out);
    }
  return out;
}

}  // namespace gjmslab
