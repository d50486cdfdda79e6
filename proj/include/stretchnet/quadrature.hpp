#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace stretchnet::quad {

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_intervals = 4000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
    long evaluations = 0;
    bool converged = false;
};

namespace detail {

// Gauss 7 / Kronrod 15 abscissae and weights (positive half, QUADPACK dqk15).
inline constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0000000000000000};
inline constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
inline constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

struct Panel {
    double a = 0.0, b = 0.0;
    double value = 0.0;
    double error = 0.0;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel eval_panel(const F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[15];
    fv[14] = f(center);
    double resg = kWg[3] * fv[14];
    double resk = kWgk[7] * fv[14];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv[2 * i] = f1;
        fv[2 * i + 1] = f2;
        resk += kWgk[i] * (f1 + f2);
        if (i % 2 == 1) resg += kWg[i / 2] * (f1 + f2);
    }

    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fv[14] - reskh);
    for (int i = 0; i < 7; ++i)
        resasc += kWgk[i] *
                  (std::abs(fv[2 * i] - reskh) + std::abs(fv[2 * i + 1] - reskh));

    Panel p;
    p.a = a;
    p.b = b;
    p.value = resk * half;
    p.error = std::abs((resk - resg) * half);
    resasc *= std::abs(half);
    if (resasc != 0.0 && p.error != 0.0)
        p.error = resasc * std::min(1.0, std::pow(200.0 * p.error / resasc, 1.5));
    return p;
}

}  // namespace detail

// Adaptive Gauss-Kronrod on [a, b]. Worst-error panel is bisected until the
// summed error estimate meets max(abs_tol, rel_tol * |value|) or the panel
// budget runs out (Result::converged reports which).
template <class F>
Result integrate(F&& f, double a, double b, const Options& opts = {}) {
    Result res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }

    std::vector<detail::Panel> heap;
    heap.reserve(64);
    heap.push_back(detail::eval_panel(f, a, b));
    res.evaluations = 15;

    double total_value = heap.front().value;
    double total_error = heap.front().error;

    const double eps = std::numeric_limits<double>::epsilon();
    while (total_error > std::max(opts.abs_tol, opts.rel_tol * std::abs(total_value)) &&
           static_cast<int>(heap.size()) < opts.max_intervals) {
        std::pop_heap(heap.begin(), heap.end());
        detail::Panel worst = heap.back();
        heap.pop_back();

        if (worst.error == 0.0) {
            // largest remaining error is exactly zero: nothing refinable
            heap.push_back(worst);
            break;
        }

        const double width = worst.b - worst.a;
        if (width <= 4.0 * eps * (std::abs(worst.a) + std::abs(worst.b)) + 1e-305) {
            // cannot refine further in double precision; accept as is
            total_error -= worst.error;
            worst.error = 0.0;
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end());
            continue;
        }

        const double mid = 0.5 * (worst.a + worst.b);
        detail::Panel left = detail::eval_panel(f, worst.a, mid);
        detail::Panel right = detail::eval_panel(f, mid, worst.b);
        res.evaluations += 30;

        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;

        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end());
    }

    // compensated resummation over the final panel set
    double sum = 0.0, comp = 0.0, err = 0.0;
    for (const auto& p : heap) {
        const double y = p.value - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        err += p.error;
    }
    res.value = sign * sum;
    res.error = err;
    res.converged = err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(sum));
    return res;
}

// ∫_a^∞ f(t) dt via t = a - ln(v), for integrands with at least exponential
// tail decay. The endpoint v = 0 is never evaluated (interior nodes only).
template <class F>
Result integrate_exp_tail(F&& f, double a, const Options& opts = {}) {
    return integrate(
        [&](double v) { return f(a - std::log(v)) / v; }, 0.0, 1.0, opts);
}

// ∫_0^∞ f(t) dt via the algebraic map t = v/(1-v); suited to subexponential
// tails where the exponential map would not converge.
template <class F>
Result integrate_zero_inf(F&& f, const Options& opts = {}) {
    return integrate(
        [&](double v) {
            const double w = 1.0 - v;
            return f(v / w) / (w * w);
        },
        0.0, 1.0, opts);
}

}  // namespace stretchnet::quad
