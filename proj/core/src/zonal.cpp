#include "gjmslab/zonal.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "gjmslab/errors.hpp"

namespace gjmslab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double sphere_volume(int n) {
  return 2.0 * std::pow(kPi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

SphereGeometry::SphereGeometry(int dim) : n(dim) {
  if (dim < 1) throw DomainError("sphere dimension must be >= 1");
  mu = 0.5 * (dim - 1);
  volume = sphere_volume(dim);
  boundary_volume = (dim == 1) ? 2.0 : sphere_volume(dim - 1);
}

int default_grid_size(const SphereGeometry& geo) {
  return geo.n == 1 ? kDefaultCircleGrid : kDefaultGrid;
}

ZonalGrid make_grid(const SphereGeometry& geo, int M) {
  if (M < 1) throw DomainError("grid size must be >= 1");
  ZonalGrid g;
  g.n = geo.n;
  g.order = M;
  g.weight_exponent = 0.5 * (geo.n - 2);
  g.t.resize(M);
  g.w.resize(M);
  if (geo.n == 1) {
    for (int i = 0; i < M; ++i) {
      double theta = kPi * ((M - 1 - i) + 0.5) / M;
      g.t[i] = std::cos(theta);
      g.w[i] = 2.0 * kPi / M;
    }
    return g;
  }
  auto rule = gauss_gegenbauer_rule(geo.mu, M);
  for (int i = 0; i < M; ++i) {
    g.t[i] = rule->nodes[i];
    g.w[i] = geo.boundary_volume * rule->weights[i];
  }
  return g;
}

ZonalGrid make_grid(const SphereGeometry& geo) { return make_grid(geo, default_grid_size(geo)); }

ZonalGrid make_grid(const SphereGeometry& geo, const QuadratureRule& rule) {
  if (std::fabs(rule.weight_exponent - 0.5 * (geo.n - 2)) > 1e-14 || rule.alpha != rule.beta)
    throw GridMismatch("quadrature weight exponent does not match the sphere dimension");
  ZonalGrid g;
  g.n = geo.n;
  g.order = rule.order;
  g.weight_exponent = rule.weight_exponent;
  g.t = rule.nodes;
  g.w = rule.weights;
  for (double& w : g.w) w *= geo.boundary_volume;
  return g;
}

double basis_eval(const SphereGeometry& geo, int l, double t) {
  return gegenbauer_eval(l, geo.n == 1 ? 0.0 : geo.mu, t);
}

void basis_all(const SphereGeometry& geo, int L, double t, double* out) {
  gegenbauer_all(L, geo.n == 1 ? 0.0 : geo.mu, t, out);
}

double mode_norm(const SphereGeometry& geo, int l) {
  if (geo.n == 1) return l == 0 ? 2.0 * kPi : kPi;
  return geo.boundary_volume * gegenbauer_norm(l, geo.mu);
}

ZonalFunction ZonalFunction::constant(const SphereGeometry& geo, double c, int L) {
  ZonalFunction f(geo, L);
  f.coeffs[0] = c;
  return f;
}

ZonalFunction ZonalFunction::mode(const SphereGeometry& geo, int l, double amp, int L) {
  ZonalFunction f(geo, std::max(L, l));
  f.coeffs[l] = amp;
  return f;
}

double ZonalFunction::operator()(double t) const {
  if (coeffs.empty()) return 0.0;
  std::vector<double> b(coeffs.size());
  basis_all(geometry, L(), t, b.data());
  double s = 0.0;
  for (size_t l = 0; l < coeffs.size(); ++l) s += coeffs[l] * b[l];
  return s;
}

double ZonalFunction::mode_l2(int l) const {
  if (l < 0 || l > L()) return 0.0;
  return coeffs[l] * coeffs[l] * mode_norm(geometry, l);
}

double ZonalFunction::l2_squared() const {
  double s = 0.0;
  for (int l = 0; l <= L(); ++l) s += mode_l2(l);
  return s;
}

ZonalFunction ZonalFunction::truncated(int Lnew) const {
  ZonalFunction g(geometry, Lnew);
  for (int l = 0; l <= std::min(Lnew, L()); ++l) g.coeffs[l] = coeffs[l];
  return g;
}

ZonalFunction& ZonalFunction::operator+=(const ZonalFunction& o) {
  if (!(geometry == o.geometry)) throw GridMismatch("zonal functions on different spheres");
  if (o.coeffs.size() > coeffs.size()) coeffs.resize(o.coeffs.size(), 0.0);
  for (size_t l = 0; l < o.coeffs.size(); ++l) coeffs[l] += o.coeffs[l];
  return *this;
}

ZonalFunction& ZonalFunction::operator-=(const ZonalFunction& o) {
  if (!(geometry == o.geometry)) throw GridMismatch("zonal functions on different spheres");
  if (o.coeffs.size() > coeffs.size()) coeffs.resize(o.coeffs.size(), 0.0);
  for (size_t l = 0; l < o.coeffs.size(); ++l) coeffs[l] -= o.coeffs[l];
  return *this;
}

ZonalFunction& ZonalFunction::operator*=(double s) {
  for (double& c : coeffs) c *= s;
  return *this;
}

ZonalFunction operator+(ZonalFunction a, const ZonalFunction& b) { return a += b; }
ZonalFunction operator-(ZonalFunction a, const ZonalFunction& b) { return a -= b; }
ZonalFunction operator*(double s, ZonalFunction a) { return a *= s; }
ZonalFunction operator*(ZonalFunction a, double s) { return a *= s; }

namespace {
void check_grid(const ZonalGrid& grid, const SphereGeometry& geo) {
  if (grid.n != geo.n || std::fabs(grid.weight_exponent - 0.5 * (geo.n - 2)) > 1e-14)
    throw GridMismatch("grid weight exponent does not match the geometry");
}

std::vector<double> raw_coefficients(const std::vector<double>& values, const ZonalGrid& grid,
                                     const SphereGeometry& geo, int K) {
  if (values.size() != grid.t.size()) throw GridMismatch("value count differs from grid size");
  std::vector<double> acc(K + 1, 0.0), b(K + 1);
  for (size_t i = 0; i < values.size(); ++i) {
    basis_all(geo, K, grid.t[i], b.data());
    double fw = values[i] * grid.w[i];
    for (int l = 0; l <= K; ++l) acc[l] += fw * b[l];
  }
  for (int l = 0; l <= K; ++l) acc[l] /= mode_norm(geo, l);
  return acc;
}
}  // namespace

std::vector<double> synthesize(const ZonalFunction& f, const ZonalGrid& grid) {
  check_grid(grid, f.geometry);
  std::vector<double> out(grid.t.size());
  std::vector<double> b(f.coeffs.size());
  for (size_t i = 0; i < grid.t.size(); ++i) {
    basis_all(f.geometry, f.L(), grid.t[i], b.data());
    double s = 0.0;
    for (size_t l = 0; l < b.size(); ++l) s += f.coeffs[l] * b[l];
    out[i] = s;
  }
  return out;
}

ZonalFunction analyze(const std::vector<double>& values, const ZonalGrid& grid, const SphereGeometry& geo, int L) {
  check_grid(grid, geo);
  return ZonalFunction(geo, raw_coefficients(values, grid, geo, L));
}

AnalysisReport analyze_with_report(const std::vector<double>& values, const ZonalGrid& grid,
                                   const SphereGeometry& geo, int L, double tail_threshold) {
  check_grid(grid, geo);
  AnalysisReport rep;
  int K = grid.order - 1;
  rep.resolvable_degree = K;
  auto c = raw_coefficients(values, grid, geo, std::max(K, L));
  double total = 0.0, tail = 0.0;
  for (int l = 0; l <= K; ++l) {
    double e = c[l] * c[l] * mode_norm(geo, l);
    total += e;
    if (l > L) tail += e;
  }
  c.resize(L + 1);
  rep.f = ZonalFunction(geo, std::move(c));
  rep.tail_energy = tail;
  rep.relative_tail = total > 0 ? tail / total : 0.0;
  if (K <= L) {
    rep.certified = false;
    std::ostringstream os;
    os << "uncertified: grid of " << grid.order << " nodes resolves degree " << K << " <= L = " << L
       << ", aliasing cannot be measured";
    rep.warning = os.str();
  } else if (rep.relative_tail > tail_threshold) {
    rep.certified = false;
    std::ostringstream os;
    os << "tail energy above degree " << L << " is " << rep.relative_tail << " of the total";
    rep.warning = os.str();
  } else {
    rep.certified = true;
  }
  return rep;
}

ZonalFunction project(const std::function<double(double)>& F, const SphereGeometry& geo, int L, int M) {
  if (M <= 0) M = std::max(default_grid_size(geo), 2 * L + 2);
  ZonalGrid g = make_grid(geo, M);
  std::vector<double> v(g.t.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = F(g.t[i]);
  return analyze(v, g, geo, L);
}

AnalysisReport project_with_report(const std::function<double(double)>& F, const SphereGeometry& geo, int L, int M) {
  if (M <= 0) M = std::max(default_grid_size(geo), 2 * L + 2);
  ZonalGrid g = make_grid(geo, M);
  std::vector<double> v(g.t.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = F(g.t[i]);
  return analyze_with_report(v, g, geo, L);
}

double integrate(const std::vector<double>& values, const ZonalGrid& grid, const SphereGeometry& geo) {
  check_grid(grid, geo);
  if (values.size() != grid.w.size()) throw GridMismatch("value count differs from grid size");
  double s = 0.0;
  for (size_t i = 0; i < values.size(); ++i) s += grid.w[i] * values[i];
  return s;
}

double integrate(const std::function<double(double)>& F, const SphereGeometry& geo, int M) {
  ZonalGrid g = make_grid(geo, M > 0 ? M : default_grid_size(geo));
  double s = 0.0;
  for (size_t i = 0; i < g.t.size(); ++i) s += g.w[i] * F(g.t[i]);
  return s;
}

double lp_norm(const std::vector<double>& values, const ZonalGrid& grid, const SphereGeometry& geo, double p) {
  check_grid(grid, geo);
  if (p == 0.0) throw DomainError("lp_norm needs p != 0");
  bool need_positive = p < 0.0 || p != std::floor(p);
  double s = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    double v = values[i];
    if (need_positive && !(v > 0.0)) throw NonPositiveValue("lp_norm: nonpositive sample with negative or fractional p");
    s += grid.w[i] * std::pow(std::fabs(v), p);
  }
  return std::pow(s, 1.0 / p);
}

double NormRefinement::spread() const {
  double d = std::max(std::fabs(fine), 1e-300);
  return std::fabs(fine - coarse) / d;
}

NormRefinement lp_norm_refined(const std::function<double(double)>& F, const SphereGeometry& geo, double p, int M) {
  if (M <= 0) M = default_grid_size(geo);
  NormRefinement r;
  r.M = M;
  for (int k = 0; k < 2; ++k) {
    ZonalGrid g = make_grid(geo, k == 0 ? M : 2 * M);
    std::vector<double> v(g.t.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = F(g.t[i]);
    (k == 0 ? r.coarse : r.fine) = lp_norm(v, g, geo, p);
  }
  return r;
}

NormRefinement lp_norm_refined(const ZonalFunction& f, double p, int M) {
  return lp_norm_refined([&](double t) { return f(t); }, f.geometry, p, M);
}

ZonalFunction multiply(const ZonalFunction& a, const ZonalFunction& b, int L_out) {
  if (!(a.geometry == b.geometry)) throw GridMismatch("zonal functions on different spheres");
  if (L_out < 0) L_out = a.L() + b.L();
  int M = (a.L() + b.L() + L_out) / 2 + 2;
  ZonalGrid g = make_grid(a.geometry, M);
  auto va = synthesize(a, g), vb = synthesize(b, g);
  for (size_t i = 0; i < va.size(); ++i) va[i] *= vb[i];
  return analyze(va, g, a.geometry, L_out);
}

ZonalFunction random_band_limited(const SphereGeometry& geo, int L, std::mt19937_64& rng, double decay) {
  std::normal_distribution<double> nd(0.0, 1.0);
  ZonalFunction f(geo, L);
  for (int l = 0; l <= L; ++l) f.coeffs[l] = nd(rng) / std::pow(1.0 + l, decay) / std::sqrt(mode_norm(geo, l));
  return f;
}

double grid_min(const ZonalFunction& f, int M) {
  if (M <= 0) M = std::max(4 * f.L() + 16, 64);
  ZonalGrid g = make_grid(f.geometry, M);
  auto v = synthesize(f, g);
  double m = std::min(f(-1.0), f(1.0));
  for (double x : v) m = std::min(m, x);
  return m;
}

ZonalFunction random_positive(const SphereGeometry& geo, int L, std::mt19937_64& rng, double floor) {
  std::uniform_real_distribution<double> ud(0.05, 0.95);
  ZonalFunction q = random_band_limited(geo, L, rng);
  q.coeffs[0] = 0.0;
  ZonalGrid g = make_grid(geo, std::max(4 * L + 16, 64));
  auto v = synthesize(q, g);
  double amax = std::max(std::fabs(q(1.0)), std::fabs(q(-1.0)));
  for (double x : v) amax = std::max(amax, std::fabs(x));
  double target = ud(rng) * (1.0 - floor);
  if (amax > 0) q *= target / amax;
  ZonalFunction f = ZonalFunction::constant(geo, 1.0, L) + q;
  f *= 1.0 / std::sqrt(f.l2_squared());
  return f;
}

void write_samples_csv(std::ostream& os, const std::vector<double>& t, const std::vector<double>& values) {
  os << "t,value\n";
  os.precision(17);
  for (size_t i = 0; i < t.size(); ++i) os << t[i] << ',' << values[i] << '\n';
}

void read_samples_csv(std::istream& is, std::vector<double>& t, std::vector<double>& values) {
  t.clear();
  values.clear();
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-' || line[0] == '+' || line[0] == '.'))
      continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("malformed sample line: " + line);
    t.push_back(std::stod(line.substr(0, comma)));
    values.push_back(std::stod(line.substr(comma + 1)));
  }
}

void write_coeffs_csv(std::ostream& os, const ZonalFunction& f) {
  os << "l,coeff\n";
  os.precision(17);
  for (int l = 0; l <= f.L(); ++l) os << l << ',' << f.coeffs[l] << '\n';
}

ZonalFunction read_coeffs_csv(std::istream& is, const SphereGeometry& geo) {
  std::vector<double> l, c;
  read_samples_csv(is, l, c);
  int L = 0;
  for (double x : l) L = std::max(L, static_cast<int>(x));
  ZonalFunction f(geo, L);
  for (size_t i = 0; i < l.size(); ++i) f.coeffs[static_cast<int>(l[i])] = c[i];
  return f;
}

}  // namespace gjmslab
