#include "gjmslab/conformal.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gjmslab/errors.hpp"

namespace gjmslab {

ConformalMap::ConformalMap(const SphereGeometry& geo, double param) : geometry(geo), a(param) {
  if (!(param > -1.0 && param < 1.0)) throw DomainError("Moebius parameter must lie in (-1, 1)");
}

double conformal_factor(double a, double t) { return (1.0 - a * a) / (1.0 + a * a - 2.0 * a * t); }

double transported_latitude(double a, double t) {
  double tp = ((1.0 + a * a) * t - 2.0 * a) / (1.0 + a * a - 2.0 * a * t);
  return std::clamp(tp, -1.0, 1.0);
}

double compose(double a, double b) { return (a + b) / (1.0 + a * b); }

double ConformalMap::factor(double t) const { return conformal_factor(a, t); }
double ConformalMap::transport(double t) const { return transported_latitude(a, t); }
double conformal_factor(const ConformalMap& map, double t) { return map.factor(t); }

double sobolev_weight(const SphereGeometry& geo, double gamma) { return (geo.n - 2.0 * gamma) / (2.0 * geo.n); }

namespace {

int pushforward_grid(const SphereGeometry& geo, int L) {
  return std::max(default_grid_size(geo), 2 * L + 1);
}

std::vector<double> pushed_values(const ZonalFunction& f, double a, double beta, const ZonalGrid& g) {
  const int n = f.geometry.n;
  std::vector<double> v(g.t.size());
  for (size_t i = 0; i < v.size(); ++i) {
    double t = g.t[i];
    v[i] = f(transported_latitude(a, t)) * std::pow(conformal_factor(a, t), n * beta);
  }
  return v;
}

}  // namespace

AnalysisReport pushforward_with_report(const ZonalFunction& f, const ConformalMap& map, double beta, int L_out) {
  if (L_out < 0) L_out = std::max(f.L(), kDefaultModes);
  ZonalGrid g = make_grid(f.geometry, pushforward_grid(f.geometry, L_out));
  return analyze_with_report(pushed_values(f, map.a, beta, g), g, f.geometry, L_out);
}

ZonalFunction pushforward(const ZonalFunction& f, const ConformalMap& map, double beta, int L_out) {
  if (map.a == 0.0) {
    if (L_out < 0) L_out = std::max(f.L(), kDefaultModes);
    return f.truncated(L_out);
  }
  return pushforward_with_report(f, map, beta, L_out).f;
}

ZonalFunction pushforward(const ZonalFunction& f, double a, double beta, int L_out) {
  return pushforward(f, ConformalMap(f.geometry, a), beta, L_out);
}

double center_of_mass(const ZonalFunction& f, double /*gamma*/) {
  if (grid_min(f) <= 0.0) throw NonPositiveValue("center_of_mass needs a positive function");
  if (f.L() < 1) return 0.0;
  const SphereGeometry& geo = f.geometry;
  // t = B_1 / (2 mu) for n >= 2 and t = B_1 for n = 1
  double scale = geo.n == 1 ? 1.0 : 1.0 / (2.0 * geo.mu);
  return f.coeffs[1] * mode_norm(geo, 1) * scale;
}

NormalizationResult normalize_center_of_mass(const ZonalFunction& f, double gamma, int L_out) {
  if (grid_min(f) <= 0.0) throw NonPositiveValue("normalize_center_of_mass needs a positive function");
  const SphereGeometry& geo = f.geometry;
  if (L_out < 0) L_out = std::max(f.L(), kDefaultModes);
  const double beta = sobolev_weight(geo, gamma);
  ZonalGrid g = make_grid(geo, pushforward_grid(geo, L_out));
  // same grid for root and analysis, so the residual of f_norm equals m(a_star)
  auto m_of = [&](double a) {
    auto v = pushed_values(f, a, beta, g);
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) s += g.w[i] * v[i] * g.t[i];
    return s;
  };

  NormalizationResult res;
  const int K = 95;
  std::vector<double> as(2 * K + 1), ms(2 * K + 1);
  for (int k = -K; k <= K; ++k) {
    as[k + K] = 0.95 * k / K;
    ms[k + K] = m_of(as[k + K]);
  }
  double lo = 0, hi = 0;
  bool found = false;
  double best_dist = 1e300;
  for (int i = 0; i + 1 < static_cast<int>(as.size()); ++i) {
    if ((ms[i] <= 0.0) != (ms[i + 1] <= 0.0) || ms[i] == 0.0) {
      ++res.sign_changes;
      double d = std::min(std::fabs(as[i]), std::fabs(as[i + 1]));
      if (d < best_dist) {
        best_dist = d;
        lo = as[i];
        hi = as[i + 1];
        found = true;
      }
    }
  }
  if (!found) {
    // widen toward the endpoints before giving up
    for (double edge : {0.99, 0.999, 0.99999, 1.0 - 1e-6}) {
      double mp = m_of(edge), mm = m_of(-edge);
      if ((mm <= 0.0) != (ms.front() <= 0.0)) {
        lo = -edge;
        hi = -0.95;
        found = true;
        ++res.sign_changes;
        break;
      }
      if ((mp <= 0.0) != (ms.back() <= 0.0)) {
        lo = 0.95;
        hi = edge;
        found = true;
        ++res.sign_changes;
        break;
      }
    }
  }
  if (!found) {
    std::ostringstream os;
    os << "no sign change of the center of mass on (-1, 1); m(-0.95) = " << ms.front() << ", m(0.95) = " << ms.back();
    throw BracketingError(os.str());
  }
  double flo = m_of(lo), fhi = m_of(hi);
  double a_star;
  if (flo == 0.0) {
    a_star = lo;
  } else if (fhi == 0.0) {
    a_star = hi;
  } else {
    boost::uintmax_t iters = 200;
    auto tol = [](double x, double y) { return std::fabs(x - y) <= 4e-16 * std::max(1.0, std::fabs(x)); };
    auto r = boost::math::tools::toms748_solve(m_of, lo, hi, flo, fhi, tol, iters);
    double c1 = r.first, c2 = r.second;
    a_star = std::fabs(m_of(c1)) <= std::fabs(m_of(c2)) ? c1 : c2;
  }
  res.a_star = a_star;
  auto v = pushed_values(f, a_star, beta, g);
  res.f_norm = analyze(v, g, geo, L_out);
  double s = 0.0;
  for (size_t i = 0; i < v.size(); ++i) s += g.w[i] * v[i] * g.t[i];
  res.residual = s;
  if (res.sign_changes > 1) {
    std::ostringstream os;
    os << res.sign_changes << " sign changes of m(a) detected; returned the root nearest a = 0";
    res.note = os.str();
  }
  return res;
}

}  // namespace gjmslab
