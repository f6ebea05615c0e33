#pragma once

namespace hfanova {

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
double regularized_gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed directly.
double regularized_gamma_q(double a, double x);

/// Upper tail of the chi-square law with df degrees of freedom.
double chi2_sf(double x, int df);
double chi2_cdf(double x, int df);

}  // namespace hfanova
