#pragma once

#include <stdexcept>

namespace gogap {

// Special functions backing the p-values in stats.h. Standard definitions;
// relative error <= 1e-10 on the reference grids in the test suite.
// Invalid arguments raise std::domain_error.

// log Gamma(x), x > 0.
double ln_gamma(double x);

// Regularized incomplete beta I_x(a, b); a, b > 0, x in [0, 1].
double reg_inc_beta(double a, double b, double x);

// Regularized lower incomplete gamma P(a, x); a > 0, x >= 0.
double reg_inc_gamma(double a, double x);

// Standard normal CDF.
double normal_cdf(double z);

// Student t CDF with df > 0, via reg_inc_beta.
double t_cdf(double t, double df);

// F distribution CDF with d1, d2 > 0, via reg_inc_beta. f < 0 yields 0.
double f_cdf(double f, double d1, double d2);

// Kolmogorov distribution survival function
// Q(lambda) = 2 * sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2), Q(<=0) = 1.
double kolmogorov_q(double lambda);

}  // namespace gogap
