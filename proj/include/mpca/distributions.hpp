#pragma once

namespace mpca {

// Quantile functions used by the control-limit formulas. All take a
// confidence level alpha in (0, 1) and throw Error(InvalidParameter)
// on out-of-range inputs.

/// Standard normal quantile.
double normal_inv(double alpha);

/// Standard normal CDF (erfc-based, accurate in both tails).
double normal_cdf(double z);

/// Chi-square quantile with real-valued degrees of freedom
/// (via the gamma-distribution quantile).
double chi2_inv(double df, double alpha);

/// Fisher F quantile with d1, d2 degrees of freedom
/// (via the inverse regularized incomplete beta).
double f_inv(double d1, double d2, double alpha);

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double regularized_beta(double a, double b, double x);

} // namespace mpca
