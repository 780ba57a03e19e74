#pragma once

// Test-only oracles that share no code with the library.

#include <cmath>
#include <numbers>

namespace oracle {

inline double chi2_density(double x, int dof) {
  if (x <= 0.0) return dof == 2 ? 0.5 : 0.0;
  double k = 0.5 * dof;
  return std::exp((k - 1.0) * std::log(x) - 0.5 * x - k * std::numbers::ln2 - std::lgamma(k));
}

namespace detail {
template <class F>
double simpson(F&& f, double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double diff = left + right - whole;
  if (depth <= 0 || std::fabs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson on [a, b].
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-13) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson(f, a, b, fa, fm, fb, whole, tol, 60);
}

/// Upper tail of the chi-squared law by direct integration of its density
/// over [chi2, chi2 + 400 + 20 dof], split into unit-width panels.
inline double chi2_upper_tail_quadrature(double chi2, int dof) {
  auto f = [dof](double x) { return chi2_density(x, dof); };
  double upper = chi2 + 400.0 + 20.0 * dof;
  double sum = 0.0;
  for (double a = chi2; a < upper; a += 1.0) sum += integrate(f, a, std::min(a + 1.0, upper), 1e-14);
  return sum;
}

}  // namespace oracle
