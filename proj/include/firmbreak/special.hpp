#pragma once

namespace firmbreak {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

/// Upper-tail probability of a chi-squared variate with `dof` degrees of
/// freedom: Q(dof/2, chi2/2). Throws a domain error on non-finite or
/// negative chi2, or dof < 1.
double chi2_pvalue(double chi2, int dof);

}  // namespace firmbreak
