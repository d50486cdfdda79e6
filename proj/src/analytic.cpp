#include "stretchnet/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stretchnet/errors.hpp"
#include "stretchnet/special_functions.hpp"

namespace stretchnet::analytic {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLog2E = std::numbers::log2e;

// Inner integrals run tighter than the caller's tolerance so their noise
// stays below what the outer adaptive loop is asked to resolve.
quad::Options tighten(const quad::Options& opts) {
    quad::Options inner = opts;
    inner.abs_tol = std::max(opts.abs_tol * 1e-2, 1e-15);
    inner.rel_tol = std::max(opts.rel_tol * 1e-2, 1e-13);
    return inner;
}

double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

// J(ln_s, a) = \int_a^inf t^p / (1 + e^(t - ln_s)) dt, the interference
// exposure integral after substituting t = -ln y in the Laplace transform.
// The integrand is ~t^p up to t = ln_s and decays exponentially beyond.
double interference_integral(double ln_s, double a, double p,
                             const quad::Options& opts) {
    const auto f = [ln_s, p](double t) {
        return std::pow(t, p) * special::logistic(ln_s - t);
    };
    const double cut = std::max(a, ln_s) + 1.0;
    const auto head = quad::integrate(f, a, cut, opts);
    const auto tail = quad::integrate_exp_tail(f, cut, opts);
    return head.value + tail.value;
}

// ln(1+theta) from mu = ln(theta); equals softplus(mu).
double log1p_theta_from_mu(double mu) { return softplus(mu); }

// Coverage by the nested quadrature, with the threshold supplied as
// mu = ln(theta) so enormous thresholds never overflow.
Estimate coverage_general_mu(const NetworkParams& params, double mu,
                             const quad::Options& opts) {
    const double lambda = params.lambda;
    const double alpha = params.alpha;
    const double beta = params.beta;
    const double p = (2.0 - beta) / beta;
    const double c_beta =
        2.0 * kPi * lambda / (beta * std::pow(alpha, 2.0 / beta));
    const double ln_n0 = params.n0 > 0.0 ? std::log(params.n0) : 0.0;
    const quad::Options inner = tighten(opts);

    const auto integrand = [&](double u) {
        const double rb = std::pow(u / (kPi * lambda), beta / 2.0);
        const double a = alpha * rb;
        double expo = -u - c_beta * interference_integral(mu + a, a, p, inner);
        if (params.n0 > 0.0) expo -= std::exp(mu + ln_n0 + a);
        return std::exp(expo);
    };
    const auto r = quad::integrate_exp_tail(integrand, 0.0, opts);
    if (!r.converged)
        throw numerical_error("coverage quadrature did not converge");
    return {std::min(r.value, 1.0), r.error};
}

// Compact-form coverage with mu = ln(theta); beta = 2/(n+1) required by
// the caller.
Estimate coverage_compact_mu(const NetworkParams& params, int n, double mu,
                             const quad::Options& opts) {
    const double lambda = params.lambda;
    const double alpha = params.alpha;
    const double np1 = n + 1.0;
    const quad::Options inner = tighten(opts);

    // c_k = a_k(theta) lambda^(1-k/(n+1)) pi^(-k/(n+1)); all <= 0.
    std::vector<double> c(static_cast<size_t>(n) + 1);
    const double fact_np1 = special::factorial(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double a_k = kPi * fact_np1 /
                           (special::factorial(k) *
                            std::pow(alpha, static_cast<double>(n - k + 1))) *
                           special::polylog_neg_exp(n - k + 1, mu, inner);
        c[static_cast<size_t>(k)] = a_k * std::pow(lambda, 1.0 - k / np1) *
                                    std::pow(kPi, -k / np1);
    }
    const double ln_n0 = params.n0 > 0.0 ? std::log(params.n0) : 0.0;
    const double pil = kPi * lambda;

    const auto integrand = [&](double u) {
        const double w = std::pow(u, 1.0 / np1);
        double expo = -u;
        double wk = 1.0;
        for (int k = 0; k <= n; ++k) {
            expo += c[static_cast<size_t>(k)] * wk;
            wk *= w;
        }
        if (params.n0 > 0.0)
            expo -= std::exp(mu + ln_n0 + alpha * std::pow(u / pil, 1.0 / np1));
        return std::exp(expo);
    };
    const auto r = quad::integrate_exp_tail(integrand, 0.0, opts);
    if (!r.converged)
        throw numerical_error("coverage quadrature did not converge");
    return {std::min(r.value, 1.0), r.error};
}

// Closed form at beta = 1 from y = ln(1+theta) and li2 = Li_2(-theta).
// The e^(x^2) Q(...) product is evaluated through the scaled complementary
// error function so large lambda y^2 / alpha^2 cannot overflow.
double beta1_value(double lambda, double alpha, double y, double li2) {
    const double x = std::sqrt(kPi * lambda) * y / alpha;
    const double factor = kPi * std::sqrt(lambda) * y * special::erfcx(x) / alpha;
    return std::exp(2.0 * kPi * lambda * li2 / (alpha * alpha)) *
           (1.0 - factor);
}

void require_interference_limited(const NetworkParams& params,
                                  const char* what) {
    if (params.n0 != 0.0)
        throw std::invalid_argument(std::string(what) +
                                    " requires n0 = 0 (interference-limited)");
}

double bound_value(const NetworkParams& params, SirThreshold theta,
                   CoverageMethod which, const quad::Options& opts) {
    const int n = params.require_compact_order();
    require_interference_limited(params, "coverage bound");
    const double lambda = params.lambda;
    const double alpha = params.alpha;
    const double np1 = n + 1.0;
    const auto a = polylog_coefficients(theta, n, alpha, tighten(opts));

    switch (which) {
        case CoverageMethod::UpperPolylog:
            return std::exp(lambda * a[0]);
        case CoverageMethod::UpperLog:
            return std::exp(-lambda * kPi * special::factorial(n + 1) *
                            std::log1p(theta.linear) / std::pow(alpha, np1));
        case CoverageMethod::LowerJensen: {
            double expo = 0.0;
            for (int k = 0; k <= n; ++k)
                expo += a[static_cast<size_t>(k)] *
                        std::pow(lambda, 1.0 - k / np1) *
                        std::pow(kPi, -k / np1) * std::tgamma(1.0 + k / np1);
            return std::exp(expo);
        }
        case CoverageMethod::UpperThreeTerm: {
            // The retained term set {0, n, n+1} is the whole sum at n = 0,
            // so the bound collapses to the exact value there.
            if (n == 0) return std::exp(lambda * a[0]);
            const double b = -a[static_cast<size_t>(n)] *
                             std::pow(lambda, 1.0 / np1) *
                             std::pow(kPi, -n / np1);
            return std::exp(lambda * a[0]) *
                   special::extended_incomplete_gamma(1.0, 0.0, b, -n / np1,
                                                      opts);
        }
        default:
            throw std::invalid_argument("not a bound method");
    }
}

}  // namespace

SirThreshold SirThreshold::from_db(double db) {
    return {std::pow(10.0, db / 10.0)};
}

SirThreshold SirThreshold::from_linear(double linear) { return {linear}; }

double SirThreshold::db() const { return 10.0 * std::log10(linear); }

void SirThreshold::validate() const {
    if (!(linear > 0.0) || !std::isfinite(linear))
        throw std::invalid_argument("threshold must be positive and finite");
}

std::string method_name(CoverageMethod m) {
    switch (m) {
        case CoverageMethod::Auto: return "auto";
        case CoverageMethod::GeneralQuadrature: return "general";
        case CoverageMethod::PolylogCompact: return "polylog";
        case CoverageMethod::ClosedBeta1: return "beta1";
        case CoverageMethod::ClosedBeta2: return "beta2";
        case CoverageMethod::UpperThreeTerm: return "upper-three-term";
        case CoverageMethod::UpperPolylog: return "upper-polylog";
        case CoverageMethod::UpperLog: return "upper-log";
        case CoverageMethod::LowerJensen: return "lower-jensen";
    }
    throw std::invalid_argument("unknown coverage method");
}

CoverageMethod method_from_name(const std::string& name) {
    for (auto m : {CoverageMethod::Auto, CoverageMethod::GeneralQuadrature,
                   CoverageMethod::PolylogCompact, CoverageMethod::ClosedBeta1,
                   CoverageMethod::ClosedBeta2, CoverageMethod::UpperThreeTerm,
                   CoverageMethod::UpperPolylog, CoverageMethod::UpperLog,
                   CoverageMethod::LowerJensen})
        if (method_name(m) == name) return m;
    throw std::invalid_argument("unknown coverage method: " + name);
}

bool is_bound_method(CoverageMethod m) {
    return m == CoverageMethod::UpperThreeTerm ||
           m == CoverageMethod::UpperPolylog ||
           m == CoverageMethod::UpperLog || m == CoverageMethod::LowerJensen;
}

double laplace_interference(const NetworkParams& params, double s,
                            double r_m, const quad::Options& opts) {
    params.validate();
    if (!(s > 0.0)) throw std::invalid_argument("s must be > 0");
    if (!(r_m >= 0.0)) throw std::invalid_argument("r must be >= 0");
    const double beta = params.beta;
    const double p = (2.0 - beta) / beta;
    const double c_beta = 2.0 * kPi * params.lambda /
                          (beta * std::pow(params.alpha, 2.0 / beta));
    const double a = params.alpha * std::pow(r_m, beta);
    return std::exp(-c_beta *
                    interference_integral(std::log(s), a, p, opts));
}

Estimate coverage_general(const NetworkParams& params, SirThreshold theta,
                          const quad::Options& opts) {
    params.validate();
    theta.validate();
    return coverage_general_mu(params, std::log(theta.linear), opts);
}

std::vector<double> polylog_coefficients(SirThreshold theta, int n,
                                         double alpha,
                                         const quad::Options& opts) {
    theta.validate();
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    std::vector<double> a(static_cast<size_t>(n) + 2);
    const double fact_np1 = special::factorial(n + 1);
    for (int k = 0; k <= n; ++k)
        a[static_cast<size_t>(k)] =
            kPi * fact_np1 /
            (special::factorial(k) *
             std::pow(alpha, static_cast<double>(n - k + 1))) *
            special::polylog_neg(n - k + 1, theta.linear, opts);
    a[static_cast<size_t>(n) + 1] = -kPi;
    return a;
}

Estimate coverage_polylog(const NetworkParams& params, SirThreshold theta,
                          const quad::Options& opts) {
    params.validate();
    theta.validate();
    const int n = params.require_compact_order();
    return coverage_compact_mu(params, n, std::log(theta.linear), opts);
}

double coverage_beta1(const NetworkParams& params, SirThreshold theta) {
    params.validate();
    theta.validate();
    if (params.beta != 1.0)
        throw std::invalid_argument("coverage_beta1 requires beta = 1");
    require_interference_limited(params, "coverage_beta1");
    return beta1_value(params.lambda, params.alpha, std::log1p(theta.linear),
                       special::polylog_neg(2, theta.linear, tighten({})));
}

double coverage_beta2(const NetworkParams& params, SirThreshold theta) {
    params.validate();
    theta.validate();
    if (params.beta != 2.0)
        throw std::invalid_argument("coverage_beta2 requires beta = 2");
    require_interference_limited(params, "coverage_beta2");
    return std::exp(-kPi * params.lambda * std::log1p(theta.linear) /
                    params.alpha);
}

double coverage_bound(const NetworkParams& params, SirThreshold theta,
                      CoverageMethod which, const quad::Options& opts) {
    params.validate();
    theta.validate();
    if (!is_bound_method(which))
        throw std::invalid_argument("not a bound method");
    return bound_value(params, theta, which, opts);
}

CoverageMethod select_method(const NetworkParams& params) {
    const auto n = params.compact_order();
    if (params.n0 == 0.0 && n) {
        if (*n == 0) return CoverageMethod::ClosedBeta2;
        if (*n == 1) return CoverageMethod::ClosedBeta1;
    }
    if (n) return CoverageMethod::PolylogCompact;
    return CoverageMethod::GeneralQuadrature;
}

Estimate coverage(const NetworkParams& params, SirThreshold theta,
                  CoverageMethod method, const quad::Options& opts) {
    params.validate();
    theta.validate();
    if (method == CoverageMethod::Auto) method = select_method(params);
    switch (method) {
        case CoverageMethod::GeneralQuadrature:
            return coverage_general(params, theta, opts);
        case CoverageMethod::PolylogCompact:
            return coverage_polylog(params, theta, opts);
        case CoverageMethod::ClosedBeta1:
            return {coverage_beta1(params, theta), 0.0};
        case CoverageMethod::ClosedBeta2:
            return {coverage_beta2(params, theta), 0.0};
        default:
            return {bound_value(params, theta, method, opts), 0.0};
    }
}

Estimate potential_throughput(const NetworkParams& params, SirThreshold theta,
                              CoverageMethod method,
                              const quad::Options& opts) {
    const Estimate cov = coverage(params, theta, method, opts);
    const double factor =
        params.lambda * kLog2E * std::log1p(theta.linear);
    return {cov.value * factor, cov.error * factor};
}

double optimal_density_beta2(double alpha, SirThreshold theta) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    theta.validate();
    return alpha / (kPi * std::log1p(theta.linear));
}

Estimate ase(const NetworkParams& params, CoverageMethod method,
             const quad::Options& opts) {
    params.validate();
    if (method == CoverageMethod::Auto) method = select_method(params);
    if (is_bound_method(method))
        throw std::invalid_argument("ase requires an exact coverage method");

    const auto nopt = params.compact_order();
    if (method != CoverageMethod::GeneralQuadrature && !nopt)
        throw std::invalid_argument("method requires beta = 2/(n+1)");
    const quad::Options inner = tighten(opts);

    // Substituting v = ln(1+t) and then w = c v maps the threshold integral
    // to (0, inf) with integrand <= e^(-w): the coverage probability obeys
    // P(e^v - 1) <= exp(-c v) because the interference exposure integral is
    // increasing in the serving distance and its value at r = 0 is a
    // fractional-order polylog bounded below by Gamma(2/beta) ln(1+t).
    // For beta = 2/(n+1) the rate c reduces to lambda pi (n+1)!/alpha^(n+1).
    const double c = params.lambda * 2.0 * kPi *
                     std::tgamma(2.0 / params.beta) /
                     (params.beta * std::pow(params.alpha, 2.0 / params.beta));

    const auto pcov = [&](double mu) -> double {
        switch (method) {
            case CoverageMethod::ClosedBeta2:
                return std::exp(-kPi * params.lambda *
                                log1p_theta_from_mu(mu) / params.alpha);
            case CoverageMethod::ClosedBeta1:
                return beta1_value(params.lambda, params.alpha,
                                   log1p_theta_from_mu(mu),
                                   special::polylog_neg_exp(2, mu, inner));
            case CoverageMethod::GeneralQuadrature:
                return coverage_general_mu(params, mu, inner).value;
            default:
                return coverage_compact_mu(params, *nopt, mu, inner).value;
        }
    };
    const auto integrand = [&](double w) {
        const double v = w / c;
        const double mu = v > 30.0 ? v + std::log1p(-std::exp(-v))
                                   : std::log(std::expm1(v));
        return pcov(mu);
    };
    const auto r = quad::integrate_exp_tail(integrand, 0.0, opts);
    if (!r.converged)
        throw numerical_error("ase quadrature did not converge");
    const double scale = params.lambda * kLog2E / c;
    return {r.value * scale, r.error * scale};
}

double ase_beta2(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    return kLog2E * alpha / kPi;
}

double ase_upper_bound(double alpha, int n) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    return std::pow(alpha, n + 1.0) * kLog2E /
           (kPi * special::factorial(n + 1));
}

CampbellCheck campbell_mean_interference(double alpha, double beta,
                                         const quad::Options& opts) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    if (!(beta > 0.0) || !(beta <= 2.0))
        throw std::invalid_argument("beta must lie in (0, 2]");
    const auto f = [alpha, beta](double r) {
        return 2.0 * kPi * r * std::exp(-alpha * std::pow(r, beta));
    };
    const auto q = quad::integrate_zero_inf(f, opts);
    const double closed = 2.0 * kPi /
                          (beta * std::pow(alpha, 2.0 / beta)) *
                          std::tgamma(2.0 / beta);
    return {{q.value, q.error}, closed};
}

}  // namespace stretchnet::analytic
