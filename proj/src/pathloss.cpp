#include "stretchnet/pathloss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stretchnet {

void NetworkParams::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("lambda must be positive and finite");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("alpha must be positive and finite");
    if (!(beta > 0.0) || !(beta <= 2.0))
        throw std::invalid_argument("beta must lie in (0, 2]");
    if (!(n0 >= 0.0) || !std::isfinite(n0))
        throw std::invalid_argument("n0 must be >= 0 and finite");
}

std::optional<int> NetworkParams::compact_order() const {
    if (!(beta > 0.0)) return std::nullopt;
    const double m = 2.0 / beta - 1.0;
    const double rounded = std::round(m);
    if (rounded < 0.0 || std::abs(m - rounded) > 1e-9) return std::nullopt;
    return static_cast<int>(rounded);
}

int NetworkParams::require_compact_order() const {
    auto n = compact_order();
    if (!n)
        throw std::invalid_argument(
            "beta must equal 2/(n+1) for an integer-order evaluation");
    return *n;
}

namespace pathloss {
namespace {

constexpr double kDbPerLn = 4.342944819032518;  // 10 / ln 10

double db10(double x) { return 10.0 * std::log10(x); }

// log(1 + e^x) without overflow.
double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(name) +
                                    " must be positive and finite");
}

[[noreturn]] void throw_singular(const PathLossModel& model) {
    throw std::domain_error(family_name(model) +
                            " is unbounded at r = 0; r must be > 0");
}

// Index of the piece whose half-open interval (edges[i], edges[i+1]]
// contains r, or -1 when r is at or below the first edge.
int pl6_piece(const PL6& m, double r) {
    auto it = std::lower_bound(m.edges.begin(), m.edges.end(), r);
    return static_cast<int>(it - m.edges.begin()) - 1;
}

}  // namespace

std::string family_name(const PathLossModel& model) {
    return "PL" + std::to_string(model.index() + 1);
}

void validate(const PathLossModel& model) {
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PL1>) {
                require_positive(m.A, "A");
                require_positive(m.alpha, "alpha");
                require_positive(m.beta, "beta");
            } else if constexpr (std::is_same_v<T, PL2>) {
                require_positive(m.A, "A");
                require_positive(m.alpha, "alpha");
                require_positive(m.beta, "beta");
                if (!(m.eta >= 0.0) || !std::isfinite(m.eta))
                    throw std::invalid_argument("eta must be >= 0 and finite");
            } else if constexpr (std::is_same_v<T, PL3>) {
                require_positive(m.A, "A");
                require_positive(m.alpha, "alpha");
                require_positive(m.eta, "eta");
            } else if constexpr (std::is_same_v<T, PL4> ||
                                 std::is_same_v<T, PL5>) {
                require_positive(m.A, "A");
                require_positive(m.alpha, "alpha");
            } else if constexpr (std::is_same_v<T, PL6>) {
                require_positive(m.A, "A");
                if (m.eta.empty() || m.eta.size() != m.edges.size())
                    throw std::invalid_argument(
                        "PL6 needs matching non-empty eta and edges");
                for (std::size_t i = 0; i < m.eta.size(); ++i) {
                    if (!(m.eta[i] >= 0.0) || !std::isfinite(m.eta[i]))
                        throw std::invalid_argument(
                            "PL6 exponents must be >= 0 and finite");
                    if (i && m.eta[i] < m.eta[i - 1])
                        throw std::invalid_argument(
                            "PL6 exponents must be non-decreasing");
                }
                if (!(m.edges.front() >= 0.0))
                    throw std::invalid_argument("PL6 edges must be >= 0");
                for (std::size_t i = 1; i < m.edges.size(); ++i)
                    if (!(m.edges[i] > m.edges[i - 1]))
                        throw std::invalid_argument(
                            "PL6 edges must be strictly increasing");
            } else if constexpr (std::is_same_v<T, PL7> ||
                                 std::is_same_v<T, PL8> ||
                                 std::is_same_v<T, PL9>) {
                require_positive(m.A, "A");
                require_positive(m.eta, "eta");
            } else if constexpr (std::is_same_v<T, PL10>) {
                require_positive(m.alpha, "alpha");
                require_positive(m.beta, "beta");
                require_positive(m.eta, "eta");
                require_positive(m.r_switch, "r_switch");
            }
        },
        model);
}

bool bounded_at_zero(const PathLossModel& model) {
    return std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PL1> || std::is_same_v<T, PL7> ||
                          std::is_same_v<T, PL8> || std::is_same_v<T, PL10>)
                return true;
            else if constexpr (std::is_same_v<T, PL2>)
                return m.eta == 0.0;
            else
                return false;
        },
        model);
}

double evaluate_gain(const PathLossModel& model, double r_m) {
    if (!(r_m >= 0.0))
        throw std::domain_error("distance must be >= 0");
    if (r_m == 0.0 && !bounded_at_zero(model)) throw_singular(model);
    return std::visit(
        [r_m, &model](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PL1>) {
                return m.A * std::exp(-m.alpha * std::pow(r_m, m.beta));
            } else if constexpr (std::is_same_v<T, PL2>) {
                if (m.eta == 0.0)
                    return m.A * std::exp(-m.alpha * std::pow(r_m, m.beta));
                return m.A * std::exp(-m.alpha * std::pow(r_m, m.beta)) *
                       std::pow(r_m, -m.eta);
            } else if constexpr (std::is_same_v<T, PL3>) {
                return m.A * std::exp(-m.alpha * r_m) * std::pow(r_m, -m.eta);
            } else if constexpr (std::is_same_v<T, PL4>) {
                return m.A * std::exp(-m.alpha * r_m) / (r_m * r_m);
            } else if constexpr (std::is_same_v<T, PL5>) {
                const double inv_r2 = 1.0 / (r_m * r_m);
                return m.A *
                       std::min(inv_r2, std::exp(-m.alpha * r_m) * inv_r2);
            } else if constexpr (std::is_same_v<T, PL6>) {
                const int i = pl6_piece(m, r_m);
                if (i < 0) throw_singular(model);
                return m.A * std::pow(r_m, -m.eta[static_cast<size_t>(i)]);
            } else if constexpr (std::is_same_v<T, PL7>) {
                return m.A * std::pow(1.0 + r_m, -m.eta);
            } else if constexpr (std::is_same_v<T, PL8>) {
                return m.A / (1.0 + std::pow(r_m, m.eta));
            } else if constexpr (std::is_same_v<T, PL9>) {
                return m.A * std::pow(r_m, -m.eta);
            } else {
                static_assert(std::is_same_v<T, PL10>);
                if (r_m <= m.r_switch)
                    return std::exp(-m.alpha * std::pow(r_m, m.beta));
                return std::pow(r_m, -m.eta);
            }
        },
        model);
}

double gain_db(const PathLossModel& model, double r_m) {
    if (!(r_m >= 0.0))
        throw std::domain_error("distance must be >= 0");
    if (r_m == 0.0 && !bounded_at_zero(model)) throw_singular(model);
    return std::visit(
        [r_m, &model](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PL1>) {
                return db10(m.A) - kDbPerLn * m.alpha * std::pow(r_m, m.beta);
            } else if constexpr (std::is_same_v<T, PL2>) {
                double db = db10(m.A) - kDbPerLn * m.alpha * std::pow(r_m, m.beta);
                if (m.eta != 0.0) db -= 10.0 * m.eta * std::log10(r_m);
                return db;
            } else if constexpr (std::is_same_v<T, PL3>) {
                return db10(m.A) - kDbPerLn * m.alpha * r_m -
                       10.0 * m.eta * std::log10(r_m);
            } else if constexpr (std::is_same_v<T, PL4>) {
                return db10(m.A) - kDbPerLn * m.alpha * r_m -
                       20.0 * std::log10(r_m);
            } else if constexpr (std::is_same_v<T, PL5>) {
                return db10(m.A) - 20.0 * std::log10(r_m) -
                       std::max(0.0, kDbPerLn * m.alpha * r_m);
            } else if constexpr (std::is_same_v<T, PL6>) {
                const int i = pl6_piece(m, r_m);
                if (i < 0) throw_singular(model);
                return db10(m.A) -
                       10.0 * m.eta[static_cast<size_t>(i)] * std::log10(r_m);
            } else if constexpr (std::is_same_v<T, PL7>) {
                return db10(m.A) - kDbPerLn * m.eta * std::log1p(r_m);
            } else if constexpr (std::is_same_v<T, PL8>) {
                return db10(m.A) -
                       kDbPerLn * softplus(m.eta * std::log(r_m));
            } else if constexpr (std::is_same_v<T, PL9>) {
                return db10(m.A) - 10.0 * m.eta * std::log10(r_m);
            } else {
                static_assert(std::is_same_v<T, PL10>);
                if (r_m <= m.r_switch)
                    return -kDbPerLn * m.alpha * std::pow(r_m, m.beta);
                return -10.0 * m.eta * std::log10(r_m);
            }
        },
        model);
}

Eigen::ArrayXd evaluate_gain(const PathLossModel& model,
                             const Eigen::ArrayXd& r_m) {
    if ((r_m <= 0.0).any())
        throw std::domain_error("vectorized gain requires r > 0");
    return std::visit(
        [&r_m](const auto& m) -> Eigen::ArrayXd {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PL1>) {
                return m.A * (-m.alpha * (m.beta * r_m.log()).exp()).exp();
            } else if constexpr (std::is_same_v<T, PL2>) {
                return m.A * (-m.alpha * (m.beta * r_m.log()).exp() -
                              m.eta * r_m.log())
                                 .exp();
            } else if constexpr (std::is_same_v<T, PL3>) {
                return m.A * (-m.alpha * r_m - m.eta * r_m.log()).exp();
            } else if constexpr (std::is_same_v<T, PL4>) {
                return m.A * (-m.alpha * r_m).exp() / r_m.square();
            } else if constexpr (std::is_same_v<T, PL5>) {
                return m.A *
                       (-(m.alpha * r_m).max(0.0) - 2.0 * r_m.log()).exp();
            } else if constexpr (std::is_same_v<T, PL6>) {
                Eigen::ArrayXd exponent(r_m.size());
                for (Eigen::Index k = 0; k < r_m.size(); ++k) {
                    const int i = pl6_piece(m, r_m[k]);
                    if (i < 0)
                        throw std::domain_error(
                            "PL6 gain requested below the first edge");
                    exponent[k] = m.eta[static_cast<size_t>(i)];
                }
                return m.A * (-exponent * r_m.log()).exp();
            } else if constexpr (std::is_same_v<T, PL7>) {
                return m.A * (-m.eta * (1.0 + r_m).log()).exp();
            } else if constexpr (std::is_same_v<T, PL8>) {
                return m.A / (1.0 + (m.eta * r_m.log()).exp());
            } else if constexpr (std::is_same_v<T, PL9>) {
                return m.A * (-m.eta * r_m.log()).exp();
            } else {
                static_assert(std::is_same_v<T, PL10>);
                Eigen::ArrayXd stretched =
                    (-m.alpha * (m.beta * r_m.log()).exp()).exp();
                Eigen::ArrayXd power = (-m.eta * r_m.log()).exp();
                return (r_m <= m.r_switch).select(stretched, power);
            }
        },
        model);
}

nlohmann::json model_to_json(const PathLossModel& model) {
    nlohmann::json params;
    std::visit(
        [&params](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PL1>) {
                params = {{"A", m.A}, {"alpha", m.alpha}, {"beta", m.beta}};
            } else if constexpr (std::is_same_v<T, PL2>) {
                params = {{"A", m.A},
                          {"alpha", m.alpha},
                          {"beta", m.beta},
                          {"eta", m.eta}};
            } else if constexpr (std::is_same_v<T, PL3>) {
                params = {{"A", m.A}, {"alpha", m.alpha}, {"eta", m.eta}};
            } else if constexpr (std::is_same_v<T, PL4> ||
                                 std::is_same_v<T, PL5>) {
                params = {{"A", m.A}, {"alpha", m.alpha}};
            } else if constexpr (std::is_same_v<T, PL6>) {
                params = {{"A", m.A}, {"eta", m.eta}, {"edges", m.edges}};
            } else if constexpr (std::is_same_v<T, PL7> ||
                                 std::is_same_v<T, PL8> ||
                                 std::is_same_v<T, PL9>) {
                params = {{"A", m.A}, {"eta", m.eta}};
            } else {
                static_assert(std::is_same_v<T, PL10>);
                params = {{"alpha", m.alpha},
                          {"beta", m.beta},
                          {"eta", m.eta},
                          {"r_switch", m.r_switch}};
            }
        },
        model);
    return {{"family", family_name(model)}, {"params", params}};
}

PathLossModel model_from_json(const nlohmann::json& j) {
    const std::string family = j.at("family").get<std::string>();
    const nlohmann::json& p = j.at("params");
    PathLossModel model;
    if (family == "PL1") {
        model = PL1{p.at("A"), p.at("alpha"), p.at("beta")};
    } else if (family == "PL2") {
        model = PL2{p.at("A"), p.at("alpha"), p.at("beta"), p.at("eta")};
    } else if (family == "PL3") {
        model = PL3{p.at("A"), p.at("alpha"), p.at("eta")};
    } else if (family == "PL4") {
        model = PL4{p.at("A"), p.at("alpha")};
    } else if (family == "PL5") {
        model = PL5{p.at("A"), p.at("alpha")};
    } else if (family == "PL6") {
        model = PL6{p.at("A"), p.at("eta").get<std::vector<double>>(),
                    p.at("edges").get<std::vector<double>>()};
    } else if (family == "PL7") {
        model = PL7{p.at("A"), p.at("eta")};
    } else if (family == "PL8") {
        model = PL8{p.at("A"), p.at("eta")};
    } else if (family == "PL9") {
        model = PL9{p.at("A"), p.at("eta")};
    } else if (family == "PL10") {
        model = PL10{p.at("alpha"), p.at("beta"), p.at("eta"),
                     p.at("r_switch")};
    } else {
        throw std::invalid_argument("unknown path loss family: " + family);
    }
    validate(model);
    return model;
}

}  // namespace pathloss
}  // namespace stretchnet
