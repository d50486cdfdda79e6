#include "stretchnet/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "stretchnet/errors.hpp"

namespace stretchnet::special {

double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double factorial(int n) {
    if (n < 0) throw std::domain_error("factorial: n must be >= 0");
    return std::tgamma(static_cast<double>(n) + 1.0);
}

double detail::polylog_neg_series(int s, double theta) {
    // Li_s(-theta) = sum_{k>=1} (-theta)^k / k^s, Kahan-compensated.
    double sum = 0.0, comp = 0.0;
    double power = 1.0;
    for (int k = 1; k <= 400; ++k) {
        power *= -theta;
        const double term = power / std::pow(static_cast<double>(k), s);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (std::abs(term) < 1e-17 * std::abs(sum) + 5e-324) break;
    }
    return sum;
}

double polylog_neg_exp(int s, double mu, const quad::Options& opts) {
    if (s < 1) throw std::domain_error("polylog_neg: order must be >= 1");
    if (s == 1) {
        // -ln(1 + e^mu)
        if (mu > 0.0) return -(mu + std::log1p(std::exp(-mu)));
        return -std::log1p(std::exp(mu));
    }
    // Li_s(-e^mu) = -(1/(s-1)!) \int_0^inf x^(s-1) / (1 + e^(x-mu)) dx.
    // The integrand is ~x^(s-1) up to x ~ mu and decays exponentially after;
    // split there so the tail transform sees pure exponential decay.
    const auto integrand = [s, mu](double x) {
        return std::pow(x, s - 1) * logistic(mu - x);
    };
    const double split = std::max(mu, 1.0);
    const auto head = quad::integrate(integrand, 0.0, split, opts);
    const auto tail = quad::integrate_exp_tail(integrand, split, opts);
    return -(head.value + tail.value) / factorial(s - 1);
}

double detail::polylog_neg_integral(int s, double theta, const quad::Options& opts) {
    return polylog_neg_exp(s, std::log(theta), opts);
}

double polylog_neg(int s, double theta, const quad::Options& opts) {
    if (s < 1) throw std::domain_error("polylog_neg: order must be >= 1");
    if (!(theta > 0.0)) throw std::domain_error("polylog_neg: theta must be > 0");
    if (s == 1) return -std::log1p(theta);
    if (theta <= 0.5) return detail::polylog_neg_series(s, theta);
    return detail::polylog_neg_integral(s, theta, opts);
}

double extended_incomplete_gamma(double a, double x0, double b, double beta,
                                 const quad::Options& opts) {
    if (x0 < 0.0)
        throw std::domain_error("extended_incomplete_gamma: x0 must be >= 0");

    // Tail convergence: exponent -t - b t^(-beta) must go to -infinity.
    if (beta < -1.0 && b < 0.0)
        throw std::domain_error(
            "extended_incomplete_gamma: divergent tail (beta < -1 with b < 0)");
    if (beta == -1.0 && b <= -1.0)
        throw std::domain_error(
            "extended_incomplete_gamma: divergent tail (beta = -1 with b <= -1)");

    // Behaviour at t -> 0 when the lower limit is zero.
    const bool crushing_zero = b > 0.0 && beta > 0.0;  // exp(-b t^-beta) -> 0
    if (x0 == 0.0) {
        if (b < 0.0 && beta > 0.0)
            throw std::domain_error(
                "extended_incomplete_gamma: divergent at t=0 (b < 0 with beta > 0)");
        if (!crushing_zero && a <= 0.0)
            throw std::domain_error(
                "extended_incomplete_gamma: divergent at t=0 (a <= 0)");
    }

    const auto g = [b, beta](double t) {
        return std::exp(-t - b * std::pow(t, -beta));
    };
    const auto f = [a, &g](double t) { return std::pow(t, a - 1.0) * g(t); };

    double head = 0.0, head_err = 0.0;
    double lo = x0;
    if (x0 < 1.0) {
        if (x0 == 0.0 && a < 1.0 && !crushing_zero) {
            // remove the t^(a-1) endpoint singularity with t = w^(1/a)
            const auto sub = [a, &g](double w) { return g(std::pow(w, 1.0 / a)); };
            const auto r = quad::integrate(sub, 0.0, 1.0, opts);
            head = r.value / a;
            head_err = r.error / a;
        } else {
            const auto r = quad::integrate(f, x0, 1.0, opts);
            head = r.value;
            head_err = r.error;
        }
        lo = 1.0;
    }
    const auto tail = quad::integrate_exp_tail(f, lo, opts);
    if (!tail.converged)
        throw numerical_error(
            "extended_incomplete_gamma: quadrature did not converge "
            "(estimated error " +
            std::to_string(tail.error + head_err) + ")");
    return head + tail.value;
}

double erfcx(double x) {
    if (x < 0.0) return 2.0 * std::exp(x * x) - erfcx(-x);
    if (x <= 20.0) return std::exp(x * x) * std::erfc(x);
    // asymptotic series 1/(x sqrt(pi)) * (1 - 1/(2x^2) + 3/(2x^2)^2 - ...)
    const double inv2x2 = 1.0 / (2.0 * x * x);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 8; ++k) {
        term *= -(2.0 * k - 1.0) * inv2x2;
        sum += term;
    }
    return sum / (x * std::sqrt(std::numbers::pi));
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace stretchnet::special
