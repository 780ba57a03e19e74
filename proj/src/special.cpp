#include "firmbreak/special.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "firmbreak/error.hpp"

namespace firmbreak {

namespace {

constexpr double kRelTol = 1e-12;
constexpr int kMaxIter = 10000;

// Series for P(a, x); converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kRelTol) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a, x); used for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kRelTol) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check_args(double a, double x) {
  if (!std::isfinite(a) || !std::isfinite(x) || a <= 0.0 || x < 0.0) {
    throw Error(ErrorKind::Domain, "incomplete gamma needs a > 0 and finite x >= 0");
  }
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double chi2_pvalue(double chi2, int dof) {
  if (!std::isfinite(chi2) || chi2 < 0.0) {
    throw Error(ErrorKind::Domain, "chi2 must be finite and nonnegative");
  }
  if (dof < 1) throw Error(ErrorKind::Domain, "dof must be >= 1, got " + std::to_string(dof));
  return regularized_gamma_q(0.5 * dof, 0.5 * chi2);
}

}  // namespace firmbreak
