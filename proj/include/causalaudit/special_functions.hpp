#pragma once

namespace causalaudit {

/// Regularized lower incomplete gamma P(a, x). Series for x < a + 1,
/// continued fraction otherwise; absolute error ~1e-14.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x). Evaluated
/// directly in the tail so deep tails keep relative accuracy (down to the
/// smallest normal double, then 0).
double regularized_gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a, b) via the Lentz continued fraction.
double regularized_beta(double a, double b, double x);

/// Inverse of I_x(a, b) in x for fixed (a, b): bisection to 1e-12 absolute.
double beta_quantile(double p, double a, double b);

/// Upper tail of the chi-square distribution with df degrees of freedom.
double chi_square_upper_tail(double x, int df);

}  // namespace causalaudit
