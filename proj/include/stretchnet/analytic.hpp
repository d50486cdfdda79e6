#pragma once

#include <string>
#include <vector>

#include "stretchnet/pathloss.hpp"
#include "stretchnet/quadrature.hpp"

namespace stretchnet::analytic {

/// SIR/SINR threshold, stored linear. dB conversion lives here so the rest
/// of the code never sees decibels.
struct SirThreshold {
    double linear = 1.0;

    static SirThreshold from_db(double db);
    static SirThreshold from_linear(double linear);
    double db() const;
    void validate() const;  // linear > 0 and finite
};

enum class CoverageMethod {
    Auto,               // cheapest exact route for the given params
    GeneralQuadrature,  // nested serving-distance x interference integrals
    PolylogCompact,     // single integral with polylog coefficients,
                        // requires beta = 2/(n+1)
    ClosedBeta1,        // closed form at beta = 1
    ClosedBeta2,        // closed form at beta = 2
    UpperThreeTerm,     // keeps the k in {0, n, n+1} exponent terms
    UpperPolylog,       // keeps the k in {0, n+1} exponent terms
    UpperLog,           // UpperPolylog with Li_{n+1}(-theta) -> -ln(1+theta)
    LowerJensen,        // Jensen's inequality on the serving distance
};

std::string method_name(CoverageMethod m);
CoverageMethod method_from_name(const std::string& name);
bool is_bound_method(CoverageMethod m);

/// Value plus a numerical error estimate (0 for closed forms).
struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

/// Laplace transform of the aggregate interference seen from a serving
/// distance r_m, evaluated at s. Interferers are farther than r_m.
double laplace_interference(const NetworkParams& params, double s,
                            double r_m, const quad::Options& opts = {});

/// Coverage probability P(SIR >= theta) by the nested quadrature valid for
/// any beta in (0, 2]. Honors params.n0.
Estimate coverage_general(const NetworkParams& params, SirThreshold theta,
                          const quad::Options& opts = {});

/// Exponent coefficients a_0..a_{n+1} of the compact coverage integral for
/// beta = 2/(n+1): a_k = pi (n+1)! Li_{n-k+1}(-theta) / (k! alpha^{n-k+1})
/// for k <= n and a_{n+1} = -pi. All non-positive.
std::vector<double> polylog_coefficients(SirThreshold theta, int n,
                                         double alpha,
                                         const quad::Options& opts = {});

/// Coverage via the compact single integral; requires beta = 2/(n+1).
/// Honors params.n0.
Estimate coverage_polylog(const NetworkParams& params, SirThreshold theta,
                          const quad::Options& opts = {});

/// Closed forms; interference-limited only (n0 must be 0).
double coverage_beta1(const NetworkParams& params, SirThreshold theta);
double coverage_beta2(const NetworkParams& params, SirThreshold theta);

/// Coverage bounds for beta = 2/(n+1); interference-limited only.
/// The three upper bounds are nested: exact <= three-term <= polylog <= log;
/// the Jensen bound is a lower bound, tight at n = 0.
double coverage_bound(const NetworkParams& params, SirThreshold theta,
                      CoverageMethod which, const quad::Options& opts = {});

/// Method the Auto dispatcher would pick for these params.
CoverageMethod select_method(const NetworkParams& params);

/// Coverage probability by the requested method (Auto picks the cheapest
/// exact route; bound methods yield the bound value).
Estimate coverage(const NetworkParams& params, SirThreshold theta,
                  CoverageMethod method = CoverageMethod::Auto,
                  const quad::Options& opts = {});

/// lambda log2(1+theta) P(SIR >= theta), bps/Hz/m^2.
Estimate potential_throughput(const NetworkParams& params, SirThreshold theta,
                              CoverageMethod method = CoverageMethod::Auto,
                              const quad::Options& opts = {});

/// Throughput-maximizing density alpha/(pi ln(1+theta)) for beta = 2.
double optimal_density_beta2(double alpha, SirThreshold theta);

/// Area spectral efficiency lambda E[log2(1+SIR)], bps/Hz/m^2, via the
/// threshold integral of the coverage probability, rescaled by the proven
/// exponential decay rate of the integrand so the infinite tail needs no
/// ad hoc truncation.
Estimate ase(const NetworkParams& params,
             CoverageMethod method = CoverageMethod::Auto,
             const quad::Options& opts = {});

/// Density-independent ASE value at beta = 2: log2(e) alpha/pi.
double ase_beta2(double alpha);

/// Constant ASE upper bound and ultradense limit for beta = 2/(n+1):
/// alpha^(n+1) log2(e) / (pi (n+1)!).
double ase_upper_bound(double alpha, int n);

/// Mean aggregate received power per unit density, both by quadrature of
/// 2 pi r e^(-alpha r^beta) over (0, inf) and by the gamma closed form.
struct CampbellCheck {
    Estimate quadrature;
    double closed_form = 0.0;
};
CampbellCheck campbell_mean_interference(double alpha, double beta,
                                         const quad::Options& opts = {});

}  // namespace stretchnet::analytic
