#pragma once

#include <memory>
#include <vector>

namespace gjmslab {

// Real number stored as sign and log-magnitude. sign == 0 is an exact zero.
struct SignedLogValue {
  int sign = 0;
  double log_mag = 0.0;
  // second word of a double-double log, keeps round trips exact near 1e300
  double log_lo = 0.0;

  static SignedLogValue from_real(double x);
  static SignedLogValue zero() { return {}; }
  double to_real() const;
  bool is_zero() const { return sign == 0; }

  SignedLogValue operator*(const SignedLogValue& o) const;
  SignedLogValue operator/(const SignedLogValue& o) const;
  SignedLogValue inverse() const;
};

bool is_nonpositive_integer(double x);

SignedLogValue gamma_signed(double x);
// 1/Gamma(x); exact zero at 0, -1, -2, ...
SignedLogValue reciprocal_gamma(double x);
// Gamma(num)/Gamma(den); exact zero when den is a pole.
SignedLogValue gamma_ratio(double num, double den);
double gamma_ratio_real(double num, double den);

double pochhammer(double a, int k);

// Gauss hypergeometric 2F1(a,b;c;z) for real z in [0,1].
double hyp2f1(double a, double b, double c, double z);

double gegenbauer_eval(int l, double mu, double t);
// fills out[0..L] with C_l^mu(t)
void gegenbauer_all(int L, double mu, double t, double* out);
double gegenbauer_norm(int l, double mu);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double weight_exponent = 0.0;  // weight (1-t^2)^{weight_exponent}
  int order = 0;
  double alpha = 0.0;  // Jacobi exponents, (1-t)^alpha (1+t)^beta
  double beta = 0.0;
};

// Gauss rule for the weight (1-t)^alpha (1+t)^beta on [-1,1].
std::shared_ptr<const QuadratureRule> gauss_jacobi_rule(double alpha, double beta, int M);
// Gauss rule for (1-t^2)^{mu-1/2}.
std::shared_ptr<const QuadratureRule> gauss_gegenbauer_rule(double mu, int M);

}  // namespace gjmslab
