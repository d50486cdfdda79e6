#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stretchnet/analytic.hpp"
#include "stretchnet/montecarlo.hpp"
#include "stretchnet/pathloss.hpp"

namespace stretchnet::sweep {

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int points = 2;
  bool log_spacing = true;

  void validate() const;  // min < max, points >= 2, log needs min > 0
};

std::vector<double> make_grid(const GridSpec& grid);

enum class Metric { Coverage, Throughput, Ase };
enum class Abscissa { Lambda, Theta };

std::string metric_name(Metric metric);
Metric metric_from_name(const std::string& name);
std::string abscissa_name(Abscissa abscissa);
Abscissa abscissa_from_name(const std::string& name);

// One method per requested curve: any analytic coverage method name
// ("auto", "general", "polylog", "beta1", "beta2", bound names) or
// "monte-carlo".
struct SweepSpec {
  Metric metric = Metric::Coverage;
  Abscissa abscissa = Abscissa::Lambda;
  GridSpec grid;                    // lambda in 1/m^2, theta linear
  NetworkParams params;             // fixed parameters (the swept one ignored)
  analytic::SirThreshold theta = analytic::SirThreshold::from_linear(1.0);
  std::vector<std::string> methods = {"auto"};
  mc::SimulationSpec mc_spec;       // used by the "monte-carlo" method
  quad::Options quad_options;

  void validate() const;
};

// One curve per method.  Gaps hold NaN values with the reason in `note`;
// `error` is the quadrature error estimate for analytic methods and the
// standard error for Monte Carlo ones.
struct MetricCurve {
  std::string label;
  std::string metric;
  std::string abscissa;
  std::vector<double> x;
  std::vector<double> value;
  std::vector<double> error;
  std::vector<std::string> note;
};

std::vector<MetricCurve> run_sweep(const SweepSpec& spec);

// Long-format CSV: curve,metric,abscissa,x,value,error,note with stable
// 12-significant-digit formatting, so emit -> parse -> emit is an identity.
void curves_to_csv(const std::vector<MetricCurve>& curves, std::ostream& out);
std::vector<MetricCurve> curves_from_csv(std::istream& in);

struct ThresholdSearch {
  double theta_min = 0.0;  // linear
  double theta_max = 0.0;  // linear
  int points = 61;

  void validate() const;  // 0 < min < max, points >= 3
};

struct ThresholdOptimum {
  analytic::SirThreshold theta_star = analytic::SirThreshold::from_linear(1.0);
  double throughput = 0.0;     // R(lambda, theta_star), bps/Hz/m^2
  bool boundary = false;       // argmax ended at a search-range endpoint
};

// Grid argmax of the potential throughput over theta, refined by a local
// golden-section pass between the argmax neighbors.  The returned optimum
// is never below any grid value.
ThresholdOptimum optimal_threshold(
    const NetworkParams& params, const ThresholdSearch& search,
    analytic::CoverageMethod method = analytic::CoverageMethod::Auto,
    const quad::Options& quad_options = {});

// Reproduces the data behind one of the study figures (fig2..fig9),
// writing <id>.csv and <id>.json (metadata: parameters, methods, seed,
// tool version) into output_dir.  Returns the written paths.
struct FigureOptions {
  std::string output_dir = ".";
  std::uint64_t seed = 20260814;
  std::optional<std::string> dataset_path;   // measured data (fig2)
  double normalization_db = -100.0;          // fig4: gain pinned at 1 km
  std::optional<std::int64_t> realizations;  // Monte Carlo figures
  std::optional<unsigned> workers;
};

std::vector<std::string> reproduce_figure(const std::string& id,
                                          const FigureOptions& options = {});

}  // namespace stretchnet::sweep
