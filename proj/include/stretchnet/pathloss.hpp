#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace stretchnet {

/// Downlink network parameters: BS density and the stretched exponential
/// attenuation exp(-alpha r^beta), with an optional average noise power
/// (linear, same scale as received power; 0 means interference-limited).
struct NetworkParams {
    double lambda = 0.0;  // BS per m^2
    double alpha = 0.0;   // m^(-beta)
    double beta = 0.0;    // in (0, 2]
    double n0 = 0.0;

    void validate() const;

    /// The non-negative integer n with beta == 2/(n+1), if beta has that
    /// form (to within 1e-9 on 2/beta, absorbing parse noise like 2/3).
    std::optional<int> compact_order() const;

    /// As compact_order() but throws std::invalid_argument when beta does
    /// not have the compact form.
    int require_compact_order() const;
};

namespace pathloss {

// One struct per model family; distances in meters, A a dimensionless
// linear gain.
struct PL1 { double A, alpha, beta; };       // A e^(-alpha r^beta)
struct PL2 { double A, alpha, beta, eta; };  // A e^(-alpha r^beta) r^-eta
struct PL3 { double A, alpha, eta; };        // A e^(-alpha r) r^-eta
struct PL4 { double A, alpha; };             // A e^(-alpha r) r^-2
struct PL5 { double A, alpha; };             // A min(r^-2, e^(-alpha r) r^-2)
struct PL7 { double A, eta; };               // A (1+r)^-eta
struct PL8 { double A, eta; };               // A (1+r^eta)^-1
struct PL9 { double A, eta; };               // A r^-eta

// Piecewise power law: exponent eta[i] applies on (edges[i], edges[i+1]],
// the last piece extending to infinity. edges.size() == eta.size(),
// edges strictly increasing, eta non-decreasing and >= 0.
struct PL6 {
    double A;
    std::vector<double> eta;
    std::vector<double> edges;
};

// Stretched exponential up to r_switch, power law beyond.
struct PL10 { double alpha, beta, eta, r_switch; };

using PathLossModel =
    std::variant<PL1, PL2, PL3, PL4, PL5, PL6, PL7, PL8, PL9, PL10>;

std::string family_name(const PathLossModel& model);

/// Parameter sanity per family; throws std::invalid_argument.
void validate(const PathLossModel& model);

/// True when the model has a finite supremum at r = 0.
bool bounded_at_zero(const PathLossModel& model);

/// Linear power gain at distance r (meters). Bounded models return their
/// supremum at r = 0; singular ones throw std::domain_error there, as does
/// any model for r < 0.
double evaluate_gain(const PathLossModel& model, double r_m);

/// 10 log10 of the gain, computed directly in dB so that deep attenuation
/// does not underflow.
double gain_db(const PathLossModel& model, double r_m);

/// Vectorized gain over strictly positive distances.
Eigen::ArrayXd evaluate_gain(const PathLossModel& model,
                             const Eigen::ArrayXd& r_m);

/// JSON round-trip, shared by the fitting module and the CLI:
/// {"family": "PL1", "params": {"A": ..., "alpha": ..., "beta": ...}}
nlohmann::json model_to_json(const PathLossModel& model);
PathLossModel model_from_json(const nlohmann::json& j);

}  // namespace pathloss
}  // namespace stretchnet
