#include "gjmslab/specfun.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include "gjmslab/errors.hpp"

namespace gjmslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

// error-free sum a + b = s + e
inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

}  // namespace

SignedLogValue SignedLogValue::from_real(double x) {
  SignedLogValue v;
  if (x == 0.0) return v;
  v.sign = x > 0 ? 1 : -1;
  double ax = std::fabs(x);
  if (!std::isfinite(ax)) {
    v.log_mag = kInf;
    return v;
  }
  v.log_mag = std::log(ax);
  double e = std::exp(v.log_mag);
  if (std::isfinite(e) && e > 0.0) v.log_lo = std::log1p((ax - e) / e);
  return v;
}

double SignedLogValue::to_real() const {
  if (sign == 0) return 0.0;
  if (log_mag == kInf) return sign * kInf;
  double e = std::exp(log_mag);
  if (!std::isfinite(e) || e == 0.0) return sign * std::exp(log_mag + log_lo);
  return sign * e * std::exp(log_lo);
}

SignedLogValue SignedLogValue::operator*(const SignedLogValue& o) const {
  SignedLogValue r;
  if (sign == 0 || o.sign == 0) return r;
  r.sign = sign * o.sign;
  double s, e;
  two_sum(log_mag, o.log_mag, s, e);
  r.log_mag = s;
  r.log_lo = std::isfinite(s) ? e + log_lo + o.log_lo : 0.0;
  return r;
}

SignedLogValue SignedLogValue::inverse() const {
  if (sign == 0) throw PoleError("inverse of exact zero");
  SignedLogValue r;
  r.sign = sign;
  r.log_mag = -log_mag;
  r.log_lo = -log_lo;
  return r;
}

SignedLogValue SignedLogValue::operator/(const SignedLogValue& o) const {
  return *this * o.inverse();
}

bool is_nonpositive_integer(double x) {
  if (x > 0.5) return false;
  double r = std::round(x);
  return std::fabs(x - r) <= 1e-12 * std::max(1.0, std::fabs(x));
}

SignedLogValue gamma_signed(double x) {
  if (is_nonpositive_integer(x)) {
    SignedLogValue v;
    v.sign = 1;
    v.log_mag = kInf;
    return v;
  }
  if (std::fabs(x) < 150.0) return SignedLogValue::from_real(boost::math::tgamma(x));
  if (x > 0) {
    SignedLogValue v;
    v.sign = 1;
    v.log_mag = boost::math::lgamma(x);
    return v;
  }
  // reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x))
  double s = boost::math::sin_pi(x);
  SignedLogValue v;
  v.sign = s > 0 ? 1 : -1;
  v.log_mag = std::log(kPi) - std::log(std::fabs(s)) - boost::math::lgamma(1.0 - x);
  return v;
}

SignedLogValue reciprocal_gamma(double x) {
  if (is_nonpositive_integer(x)) return SignedLogValue::zero();
  return gamma_signed(x).inverse();
}

SignedLogValue gamma_ratio(double num, double den) {
  bool pn = is_nonpositive_integer(num);
  bool pd = is_nonpositive_integer(den);
  if (pn && pd) throw AmbiguousPole("Gamma ratio with poles in numerator and denominator");
  if (pn) throw PoleError("Gamma ratio with a pole in the numerator");
  if (pd) return SignedLogValue::zero();
  if (num == den) return SignedLogValue::from_real(1.0);
  if (num > 0 && den > 0) {
    double lg = boost::math::lgamma(num) - boost::math::lgamma(den);
    if (std::fabs(lg) < 600.0) return SignedLogValue::from_real(boost::math::tgamma_ratio(num, den));
    SignedLogValue v;
    v.sign = 1;
    v.log_mag = lg;
    return v;
  }
  return gamma_signed(num) * reciprocal_gamma(den);
}

double gamma_ratio_real(double num, double den) { return gamma_ratio(num, den).to_real(); }

double pochhammer(double a, int k) {
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= a + i;
  return p;
}

namespace {

// direct series; returns the sum and throws past the term cap
double hyp_series(double a, double b, double c, double z) {
  long double sum = 1.0L, term = 1.0L;
  int small = 0;
  for (int k = 0; k < 10000; ++k) {
    term *= (static_cast<long double>(a) + k) * (static_cast<long double>(b) + k) /
            ((static_cast<long double>(c) + k) * (k + 1)) * z;
    sum += term;
    if (term == 0.0L) return static_cast<double>(sum);
    if (std::fabs(term) < 1e-17L * std::fabs(sum)) {
      if (++small >= 2) return static_cast<double>(sum);
    } else {
      small = 0;
    }
  }
  throw ConvergenceError("hyp2f1 series did not converge in 10000 terms");
}

// number of terms if a is a nonpositive integer, else -1
int terminating_degree(double a) {
  if (!is_nonpositive_integer(a)) return -1;
  return static_cast<int>(-std::round(a));
}

double hyp_connection(double a, double b, double c, double z) {
  double d = c - a - b;
  double w = 1.0 - z;
  SignedLogValue gc = gamma_signed(c);
  SignedLogValue A = gc * gamma_signed(d) * reciprocal_gamma(c - a) * reciprocal_gamma(c - b);
  SignedLogValue B = gc * gamma_signed(-d) * reciprocal_gamma(a) * reciprocal_gamma(b);
  double t1 = A.is_zero() ? 0.0 : A.to_real() * hyp_series(a, b, 1.0 - d, w);
  double t2 = B.is_zero() ? 0.0 : B.to_real() * std::pow(w, d) * hyp_series(c - a, c - b, d + 1.0, w);
  return t1 + t2;
}

}  // namespace

double hyp2f1(double a, double b, double c, double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError("hyp2f1: z outside [0,1]");
  if (z == 0.0) return 1.0;
  int ta = terminating_degree(a), tb = terminating_degree(b);
  int term = -1;
  if (ta >= 0 && tb >= 0) term = std::min(ta, tb);
  else if (ta >= 0) term = ta;
  else if (tb >= 0) term = tb;
  if (is_nonpositive_integer(c)) {
    int tc = static_cast<int>(-std::round(c));
    if (term < 0 || term > tc) throw PoleError("hyp2f1: c is a nonpositive integer");
  }
  if (term >= 0) {
    long double sum = 1.0L, t = 1.0L;
    for (int k = 0; k < term; ++k) {
      t *= (static_cast<long double>(a) + k) * (static_cast<long double>(b) + k) /
           ((static_cast<long double>(c) + k) * (k + 1)) * z;
      sum += t;
    }
    return static_cast<double>(sum);
  }
  double d = c - a - b;
  if (z == 1.0) {
    if (d <= 0.0) throw PoleError("hyp2f1: divergent at z = 1");
    SignedLogValue v = gamma_signed(c) * gamma_signed(d) * reciprocal_gamma(c - a) * reciprocal_gamma(c - b);
    return v.to_real();
  }
  if (z <= 0.75) return hyp_series(a, b, c, z);
  if (std::fabs(d - std::round(d)) < 1e-4) {
    if (z <= 0.99) return hyp_series(a, b, c, z);
    const double h = 1e-6;
    return 0.5 * (hyp_connection(a, b, c + h, z) + hyp_connection(a, b, c - h, z));
  }
  return hyp_connection(a, b, c, z);
}

double gegenbauer_eval(int l, double mu, double t) {
  if (l == 0) return 1.0;
  if (mu == 0.0) {
    double p0 = 1.0, p1 = t;
    for (int k = 1; k < l; ++k) {
      double p2 = 2.0 * t * p1 - p0;
      p0 = p1;
      p1 = p2;
    }
    return p1;
  }
  double p0 = 1.0, p1 = 2.0 * mu * t;
  for (int k = 1; k < l; ++k) {
    double p2 = (2.0 * t * (k + mu) * p1 - (k + 2.0 * mu - 1.0) * p0) / (k + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

void gegenbauer_all(int L, double mu, double t, double* out) {
  out[0] = 1.0;
  if (L == 0) return;
  if (mu == 0.0) {
    out[1] = t;
    for (int k = 1; k < L; ++k) out[k + 1] = 2.0 * t * out[k] - out[k - 1];
    return;
  }
  out[1] = 2.0 * mu * t;
  for (int k = 1; k < L; ++k)
    out[k + 1] = (2.0 * t * (k + mu) * out[k] - (k + 2.0 * mu - 1.0) * out[k - 1]) / (k + 1);
}

double gegenbauer_norm(int l, double mu) {
  if (!(mu > 0.0)) throw DomainError("gegenbauer_norm needs mu > 0");
  double ratio = boost::math::tgamma_ratio(l + 2.0 * mu, l + 1.0);
  double g = boost::math::tgamma(mu);
  return kPi * std::exp2(1.0 - 2.0 * mu) * ratio / ((l + mu) * g * g);
}

namespace {

struct RuleKey {
  double alpha, beta;
  int M;
  bool operator<(const RuleKey& o) const {
    return std::tie(alpha, beta, M) < std::tie(o.alpha, o.beta, o.M);
  }
};

std::mutex g_rule_mutex;
std::map<RuleKey, std::shared_ptr<const QuadratureRule>> g_rules;

std::shared_ptr<const QuadratureRule> build_jacobi(double alpha, double beta, int M) {
  if (M < 1) throw DomainError("quadrature order must be >= 1");
  if (!(alpha > -1.0 && beta > -1.0)) throw DomainError("Jacobi exponents must exceed -1");
  const double ab = alpha + beta;
  std::vector<double> a(M), sb(M + 1, 0.0);
  for (int k = 0; k < M; ++k) {
    if (k == 0) {
      a[k] = (beta - alpha) / (ab + 2.0);
    } else {
      double s = 2.0 * k + ab;
      a[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k <= M; ++k) {
    double bk;
    if (k == 1) {
      bk = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      double s = 2.0 * k + ab;
      bk = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sb[k] = std::sqrt(bk);
  }
  const double mu0 = std::exp2(ab + 1.0) * boost::math::beta(alpha + 1.0, beta + 1.0);

  std::vector<double> x(M);
  if (M == 1) {
    x[0] = a[0];
  } else {
    Eigen::VectorXd diag(M), sub(M - 1);
    for (int k = 0; k < M; ++k) diag[k] = a[k];
    for (int k = 0; k < M - 1; ++k) sub[k] = sb[k + 1];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceError("tridiagonal eigensolver failed");
    for (int k = 0; k < M; ++k) x[k] = es.eigenvalues()[k];
  }

  auto rule = std::make_shared<QuadratureRule>();
  rule->nodes.resize(M);
  rule->weights.resize(M);
  rule->order = M;
  rule->alpha = alpha;
  rule->beta = beta;
  rule->weight_exponent = alpha;
  const double p0 = 1.0 / std::sqrt(mu0);
  for (int i = 0; i < M; ++i) {
    double t = x[i];
    double last_step = 1.0;
    double sum_sq = 0.0;
    for (int it = 0; it < 12; ++it) {
      double pm1 = 0.0, p = p0, dm1 = 0.0, d = 0.0;
      sum_sq = p * p;
      for (int k = 0; k < M; ++k) {
        double pn = ((t - a[k]) * p - sb[k] * pm1) / sb[k + 1];
        double dn = (p + (t - a[k]) * d - sb[k] * dm1) / sb[k + 1];
        pm1 = p;
        p = pn;
        dm1 = d;
        d = dn;
        if (k + 1 < M) sum_sq += p * p;
      }
      double step = (d != 0.0) ? p / d : 0.0;
      t -= step;
      last_step = std::fabs(step);
      if (last_step <= 1e-15) break;
    }
    if (!(last_step <= 1e-14) || !(t > -1.0 && t < 1.0))
      throw ConvergenceError("Gauss node failed to converge");
    // Christoffel weight at the polished node
    double pm1 = 0.0, p = p0;
    sum_sq = p * p;
    for (int k = 0; k + 1 < M; ++k) {
      double pn = ((t - a[k]) * p - sb[k] * pm1) / sb[k + 1];
      pm1 = p;
      p = pn;
      sum_sq += p * p;
    }
    rule->nodes[i] = t;
    rule->weights[i] = 1.0 / sum_sq;
  }
  for (int i = 1; i < M; ++i)
    if (!(rule->nodes[i] > rule->nodes[i - 1])) throw ConvergenceError("Gauss nodes not increasing");
  return rule;
}

}  // namespace

std::shared_ptr<const QuadratureRule> gauss_jacobi_rule(double alpha, double beta, int M) {
  RuleKey key{alpha, beta, M};
  {
    std::lock_guard<std::mutex> lock(g_rule_mutex);
    auto it = g_rules.find(key);
    if (it != g_rules.end()) return it->second;
  }
  auto rule = build_jacobi(alpha, beta, M);
  std::lock_guard<std::mutex> lock(g_rule_mutex);
  g_rules.emplace(key, rule);
  return rule;
}

std::shared_ptr<const QuadratureRule> gauss_gegenbauer_rule(double mu, int M) {
  return gauss_jacobi_rule(mu - 0.5, mu - 0.5, M);
}

}  // namespace gjmslab
