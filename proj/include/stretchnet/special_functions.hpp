#pragma once

#include "stretchnet/quadrature.hpp"

namespace stretchnet::special {

/// Polylogarithm at a negative real argument: Li_s(-theta) for integer
/// order s >= 1 and theta > 0. Always negative; Li_1(-theta) = -ln(1+theta)
/// is returned exactly. Small arguments use the alternating series, large
/// ones the integral representation on a transformed finite domain.
double polylog_neg(int s, double theta, const quad::Options& opts = {});

/// Li_s(-e^mu). Stable for arbitrarily large mu, where forming e^mu would
/// overflow.
double polylog_neg_exp(int s, double mu, const quad::Options& opts = {});

/// Extended incomplete gamma function
///   Gamma'(a, x0, b, beta) = \int_{x0}^inf t^(a-1) exp(-t - b t^(-beta)) dt.
/// With b = 0 this reduces to the ordinary upper incomplete gamma
/// Gamma(a, x0). Throws std::domain_error when the integral diverges for
/// the supplied arguments.
double extended_incomplete_gamma(double a, double x0, double b, double beta,
                                 const quad::Options& opts = {});

/// Gaussian tail probability Q(x) = P(N(0,1) > x) = erfc(x/sqrt(2))/2.
double q_function(double x);

/// Scaled complementary error function exp(x^2) erfc(x); does not overflow
/// for large positive x.
double erfcx(double x);

/// n! as a double (n >= 0).
double factorial(int n);

/// Logistic sigmoid 1/(1 + e^(-x)), overflow-safe on both sides.
double logistic(double x);

namespace detail {
// The two evaluation routes, exposed so tests can cross-check them.
double polylog_neg_series(int s, double theta);
double polylog_neg_integral(int s, double theta, const quad::Options& opts);
}  // namespace detail

}  // namespace stretchnet::special
