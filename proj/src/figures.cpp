#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stretchnet/fitting.hpp"
#include "stretchnet/sweep.hpp"
#include "stretchnet/version.hpp"

namespace stretchnet::sweep {

namespace {

using nlohmann::json;

constexpr double kPerKm2 = 1e-6;  // BS/km^2 -> BS/m^2

std::string format_g(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

NetworkParams fitted_stretched_params(double lambda_km2) {
  NetworkParams params;
  params.lambda = lambda_km2 * kPerKm2;
  params.alpha = 1.037;  // per sqrt(meter), the constrained-fit value
  params.beta = 0.5;
  return params;
}

// Alpha pinning the stretched-exponential gain at 1 km to `level_db`,
// making curves with different beta comparable on one plot.
double normalized_alpha(double level_db, double beta) {
  if (!(level_db < 0.0) || !std::isfinite(level_db)) {
    throw std::invalid_argument("normalization_db must be negative");
  }
  return -level_db * std::numbers::ln10 / 10.0 / std::pow(1000.0, beta);
}

GridSpec theta_grid(double lo_db, double hi_db, int points) {
  GridSpec grid;
  grid.min = db_to_linear(lo_db);
  grid.max = db_to_linear(hi_db);
  grid.points = points;
  grid.log_spacing = true;  // uniform in dB
  return grid;
}

GridSpec lambda_grid(double lo_km2, double hi_km2, int points) {
  GridSpec grid;
  grid.min = lo_km2 * kPerKm2;
  grid.max = hi_km2 * kPerKm2;
  grid.points = points;
  grid.log_spacing = true;
  return grid;
}

// Desk-scale simulation window.  The 2.5 km margin between the evaluation
// window and the deployment edge keeps truncated interference far below
// the statistical resolution at the densities used here.
mc::SimulationSpec figure_mc_spec(const FigureOptions& options,
                                  std::int64_t default_realizations) {
  mc::SimulationSpec spec;
  spec.outer_region_km = 6.0;
  spec.inner_region_km = 1.0;
  spec.realizations = options.realizations.value_or(default_realizations);
  spec.users_per_realization = 20;
  spec.master_seed = options.seed;
  spec.workers = options.workers.value_or(0);
  return spec;
}

json mc_spec_to_json(const mc::SimulationSpec& spec) {
  return json{{"outer_region_km", spec.outer_region_km},
              {"inner_region_km", spec.inner_region_km},
              {"realizations", spec.realizations},
              {"users_per_realization", spec.users_per_realization},
              {"master_seed", spec.master_seed},
              {"workers", spec.workers}};
}

// Maximum of f over [lo, hi] by golden-section search on a log axis.
double golden_max_log(const std::function<double(double)>& f, double lo,
                      double hi) {
  double a = std::log(lo);
  double b = std::log(hi);
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(std::exp(c));
  double fd = f(std::exp(d));
  for (int i = 0; i < 80 && b - a > 1e-12; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(std::exp(d));
    }
  }
  return std::exp(0.5 * (a + b));
}

void append_relabelled(std::vector<MetricCurve>& curves,
                       std::vector<MetricCurve>&& part,
                       const std::string& suffix) {
  for (MetricCurve& curve : part) {
    curve.label += suffix;
    curves.push_back(std::move(curve));
  }
}

// fig3: coverage against the threshold at two densities, exact compact
// integral vs. the closed-form lower bound vs. simulation.
void build_fig3(const FigureOptions& options, std::vector<MetricCurve>& curves,
                json& meta) {
  const mc::SimulationSpec mc_spec = figure_mc_spec(options, 2000);
  for (const double lambda_km2 : {50.0, 500.0}) {
    SweepSpec spec;
    spec.metric = Metric::Coverage;
    spec.abscissa = Abscissa::Theta;
    spec.grid = theta_grid(-10.0, 20.0, 61);
    spec.params = fitted_stretched_params(lambda_km2);
    spec.methods = {"polylog", "lower-jensen", "monte-carlo"};
    spec.mc_spec = mc_spec;
    append_relabelled(curves, run_sweep(spec),
                      " lambda_km2=" + format_g(lambda_km2));
  }
  meta["params"] = {{"alpha", 1.037},
                    {"beta", 0.5},
                    {"lambda_km2", {50.0, 500.0}},
                    {"theta_db", {-10.0, 20.0, 61}}};
  meta["methods"] = {"polylog", "lower-jensen", "monte-carlo"};
  meta["monte_carlo"] = mc_spec_to_json(mc_spec);
  meta["notes"] = {"the lower bound tightens as density grows",
                   "x is the linear threshold; dB = 10*log10(x)"};
}

// fig4: potential throughput against density for four beta values, alpha
// normalized so every curve has the same gain at 1 km.
void build_fig4(const FigureOptions& options, std::vector<MetricCurve>& curves,
                json& meta) {
  const std::vector<std::pair<std::string, double>> betas = {
      {"beta=2", 2.0}, {"beta=1", 1.0}, {"beta=2/3", 2.0 / 3.0},
      {"beta=0.5", 0.5}};
  json alphas = json::object();
  for (const auto& [label, beta] : betas) {
    SweepSpec spec;
    spec.metric = Metric::Throughput;
    spec.abscissa = Abscissa::Lambda;
    spec.grid = lambda_grid(1.0, 1e4, 40);
    spec.params.alpha = normalized_alpha(options.normalization_db, beta);
    spec.params.beta = beta;
    spec.theta = analytic::SirThreshold::from_db(5.0);
    spec.methods = {"auto"};
    alphas[label] = spec.params.alpha;
    append_relabelled(curves, run_sweep(spec), " " + label);
  }
  meta["params"] = {{"theta_db", 5.0},
                    {"lambda_km2", {1.0, 1e4, 40}},
                    {"normalization_db_at_1km", options.normalization_db},
                    {"alpha_per_beta", alphas}};
  meta["methods"] = {"auto"};
  meta["notes"] = {"each curve peaks at an interior density",
                   "x is BS per m^2; BS per km^2 = 1e6 * x"};
}

// fig5: simulated coverage under measurement-fitted path-loss models.
void build_fig5(const FigureOptions& options, std::vector<MetricCurve>& curves,
                json& meta) {
  const std::vector<std::pair<std::string, pathloss::PathLossModel>> models =
      {{"PL1", pathloss::PL1{0.0094, 0.9019, 0.5210}},
       {"PL4", pathloss::PL4{0.0758, 0.0281}},
       {"PL9", pathloss::PL9{286.16, 4.6467}},
       {"PL10", pathloss::PL10{0.9019, 0.5210, 4.0, 350.0}}};
  const std::vector<double> thetas = make_grid(theta_grid(-10.0, 20.0, 61));
  const mc::SimulationSpec mc_spec = figure_mc_spec(options, 500);

  json model_meta = json::object();
  for (const auto& [name, model] : models) {
    model_meta[name] = pathloss::model_to_json(model);
    for (const double lambda_km2 : {50.0, 500.0}) {
      const auto set = mc::simulate(mc_spec, lambda_km2 * kPerKm2, model);
      MetricCurve curve;
      curve.label = name + " lambda_km2=" + format_g(lambda_km2);
      curve.metric = "coverage";
      curve.abscissa = "theta_linear";
      for (const double theta : thetas) {
        const auto estimate = mc::empirical_coverage(
            set, analytic::SirThreshold::from_linear(theta));
        curve.x.push_back(theta);
        curve.value.push_back(estimate.value);
        curve.error.push_back(estimate.standard_error);
        curve.note.emplace_back();
      }
      curves.push_back(std::move(curve));
    }
  }
  meta["params"] = {{"lambda_km2", {50.0, 500.0}},
                    {"theta_db", {-10.0, 20.0, 61}}};
  meta["models"] = model_meta;
  meta["methods"] = {"monte-carlo"};
  meta["monte_carlo"] = mc_spec_to_json(mc_spec);
  meta["notes"] = {
      "PL9 uses its own fitted exponent; PL10 switches from the stretched "
      "exponential to a fourth-power law at 350 m"};
}

// fig6: coverage and throughput against density at a 5 dB threshold, with
// the throughput-maximizing density marked.
void build_fig6(const FigureOptions& options, std::vector<MetricCurve>& curves,
                json& meta) {
  static_cast<void>(options);
  const auto theta = analytic::SirThreshold::from_db(5.0);
  for (const Metric metric : {Metric::Coverage, Metric::Throughput}) {
    SweepSpec spec;
    spec.metric = metric;
    spec.abscissa = Abscissa::Lambda;
    spec.grid = lambda_grid(10.0, 1e4, 60);
    spec.params = fitted_stretched_params(50.0);  // density comes from grid
    spec.theta = theta;
    spec.methods = {"auto"};
    append_relabelled(curves, run_sweep(spec), " " + metric_name(metric));
  }

  MetricCurve& throughput = curves.back();
  const auto argmax = static_cast<std::size_t>(
      std::max_element(throughput.value.begin(), throughput.value.end()) -
      throughput.value.begin());
  throughput.note[argmax] = "argmax";

  const auto objective = [&](double lambda) {
    NetworkParams params = fitted_stretched_params(0.0);
    params.lambda = lambda;
    return analytic::potential_throughput(params, theta).value;
  };
  const std::size_t lo = argmax > 0 ? argmax - 1 : argmax;
  const std::size_t hi =
      argmax + 1 < throughput.x.size() ? argmax + 1 : argmax;
  const double lambda_star =
      golden_max_log(objective, throughput.x[lo], throughput.x[hi]);

  meta["params"] = {{"alpha", 1.037},
                    {"beta", 0.5},
                    {"theta_db", 5.0},
                    {"lambda_km2", {10.0, 1e4, 60}}};
  meta["methods"] = {"auto"};
  meta["lambda_star_per_km2"] = lambda_star / kPerKm2;
  meta["throughput_at_lambda_star"] = objective(lambda_star);
  meta["notes"] = {"throughput peaks near 1200 BS per km^2",
                   "the grid row nearest the peak carries an argmax note"};
}

// fig7: optimal threshold, its throughput, and coverage at the optimum, as
// functions of density.
void build_fig7(const FigureOptions& options, std::vector<MetricCurve>& curves,
                json& meta) {
  static_cast<void>(options);
  ThresholdSearch search;
  search.theta_min = db_to_linear(-15.0);
  search.theta_max = db_to_linear(15.0);
  search.points = 61;

  const std::vector<double> lambdas =
      make_grid(lambda_grid(100.0, 2000.0, 25));

  MetricCurve theta_curve{"theta_star_db", "theta_star_db",
                          "lambda_per_m2", {}, {}, {}, {}};
  MetricCurve tput_curve{"throughput_at_theta_star", "throughput",
                         "lambda_per_m2", {}, {}, {}, {}};
  MetricCurve cov_curve{"coverage_at_theta_star", "coverage",
                        "lambda_per_m2", {}, {}, {}, {}};
  for (const double lambda : lambdas) {
    NetworkParams params = fitted_stretched_params(0.0);
    params.lambda = lambda;
    const ThresholdOptimum optimum = optimal_threshold(params, search);
    const auto coverage =
        analytic::coverage(params, optimum.theta_star);
    theta_curve.x.push_back(lambda);
    theta_curve.value.push_back(optimum.theta_star.db());
    theta_curve.error.push_back(0.0);
    theta_curve.note.emplace_back(optimum.boundary ? "boundary" : "");
    tput_curve.x.push_back(lambda);
    tput_curve.value.push_back(optimum.throughput);
    tput_curve.error.push_back(0.0);
    tput_curve.note.emplace_back();
    cov_curve.x.push_back(lambda);
    cov_curve.value.push_back(coverage.value);
    cov_curve.error.push_back(coverage.error);
    cov_curve.note.emplace_back();
  }
  curves.push_back(std::move(theta_curve));
  curves.push_back(std::move(tput_curve));
  curves.push_back(std::move(cov_curve));

  meta["params"] = {{"alpha", 1.037},
                    {"beta", 0.5},
                    {"lambda_km2", {100.0, 2000.0, 25}},
                    {"theta_search_db", {-15.0, 15.0, 61}}};
  meta["methods"] = {"auto"};
  meta["notes"] = {"denser networks favor lower thresholds"};
}

// fig8: area spectral efficiency against density for four beta values,
// each with its constant upper bound.
void build_fig8(const FigureOptions& options, std::vector<MetricCurve>& curves,
                json& meta) {
  static_cast<void>(options);
  const double alpha = 1.0;
  const std::vector<std::pair<std::string, double>> betas = {
      {"beta=2", 2.0}, {"beta=1", 1.0}, {"beta=2/3", 2.0 / 3.0},
      {"beta=0.5", 0.5}};
  // With alpha = 1 every compact order shares the convergence scale
  // alpha^(n+1); the approach to the bound slows as beta falls (the
  // deficit decays like lambda^(-1/(n+1))), and a top of 1e5 puts even
  // beta = 0.5 above 96% of its limit.  Densities here are in BS per m^2.
  GridSpec grid;
  grid.min = 1e-4;
  grid.max = 1e5;
  grid.points = 30;
  grid.log_spacing = true;
  const std::vector<double> lambdas = make_grid(grid);
  json bounds = json::object();
  for (const auto& [label, beta] : betas) {
    SweepSpec spec;
    spec.metric = Metric::Ase;
    spec.abscissa = Abscissa::Lambda;
    spec.grid = grid;
    spec.params.alpha = alpha;
    spec.params.beta = beta;
    spec.methods = {"auto"};
    append_relabelled(curves, run_sweep(spec), " " + label);

    NetworkParams probe;
    probe.lambda = 1.0;
    probe.alpha = alpha;
    probe.beta = beta;
    const int n = probe.require_compact_order();
    const double bound = analytic::ase_upper_bound(alpha, n);
    bounds[label] = bound;
    MetricCurve bound_curve{"bound " + label, "ase", "lambda_per_m2",
                            lambdas,
                            std::vector<double>(lambdas.size(), bound),
                            std::vector<double>(lambdas.size(), 0.0),
                            std::vector<std::string>(lambdas.size(), "")};
    curves.push_back(std::move(bound_curve));
  }
  meta["params"] = {{"alpha", alpha},
                    {"lambda_per_m2", {grid.min, grid.max, grid.points}}};
  meta["methods"] = {"auto"};
  meta["ase_upper_bound"] = bounds;
  meta["notes"] = {"every curve rises toward its constant bound",
                   "beta=2 sits exactly on its bound"};
}

// fig9: fixed-threshold throughput, optimal-threshold throughput, and area
// spectral efficiency, ordered pointwise.
void build_fig9(const FigureOptions& options, std::vector<MetricCurve>& curves,
                json& meta) {
  static_cast<void>(options);
  const auto theta = analytic::SirThreshold::from_db(5.0);
  ThresholdSearch search;
  search.theta_min = db_to_linear(-15.0);
  search.theta_max = db_to_linear(15.0);
  search.points = 61;

  const std::vector<double> lambdas =
      make_grid(lambda_grid(100.0, 2000.0, 15));
  MetricCurve fixed{"throughput_5db", "throughput", "lambda_per_m2",
                    {}, {}, {}, {}};
  MetricCurve best{"throughput_at_theta_star", "throughput",
                   "lambda_per_m2", {}, {}, {}, {}};
  MetricCurve ase{"ase", "ase", "lambda_per_m2", {}, {}, {}, {}};
  for (const double lambda : lambdas) {
    NetworkParams params = fitted_stretched_params(0.0);
    params.lambda = lambda;
    const auto fixed_estimate = analytic::potential_throughput(params, theta);
    const ThresholdOptimum optimum = optimal_threshold(params, search);
    const auto ase_estimate = analytic::ase(params);
    fixed.x.push_back(lambda);
    fixed.value.push_back(fixed_estimate.value);
    fixed.error.push_back(fixed_estimate.error);
    fixed.note.emplace_back();
    best.x.push_back(lambda);
    best.value.push_back(optimum.throughput);
    best.error.push_back(0.0);
    best.note.emplace_back();
    ase.x.push_back(lambda);
    ase.value.push_back(ase_estimate.value);
    ase.error.push_back(ase_estimate.error);
    ase.note.emplace_back();
  }
  curves.push_back(std::move(fixed));
  curves.push_back(std::move(best));
  curves.push_back(std::move(ase));

  meta["params"] = {{"alpha", 1.037},
                    {"beta", 0.5},
                    {"theta_db", 5.0},
                    {"lambda_km2", {100.0, 2000.0, 15}},
                    {"theta_search_db", {-15.0, 15.0, 61}}};
  meta["methods"] = {"auto"};
  meta["notes"] = {
      "fixed-threshold throughput <= optimal throughput <= ase, pointwise"};
}

// fig2: measured gains against fitted models; needs a dataset file.
void build_fig2(const FigureOptions& options, std::vector<MetricCurve>& curves,
                json& meta) {
  if (!options.dataset_path) {
    throw std::invalid_argument(
        "fig2 plots measured data and needs dataset_path to point at a CSV "
        "file with an r_m,gain_db header");
  }
  std::ifstream in(*options.dataset_path);
  if (!in) {
    throw std::invalid_argument("cannot open dataset file: " +
                                *options.dataset_path);
  }
  const auto dataset = fitting::dataset_from_csv(in, *options.dataset_path);

  MetricCurve measured{"measured", "gain_db", "r_m", {}, {}, {}, {}};
  double r_min = std::numeric_limits<double>::infinity();
  double r_max = 0.0;
  for (const auto& point : dataset.points) {
    measured.x.push_back(point.r_m);
    measured.value.push_back(point.gain_db);
    measured.error.push_back(0.0);
    measured.note.emplace_back();
    r_min = std::min(r_min, point.r_m);
    r_max = std::max(r_max, point.r_m);
  }
  curves.push_back(std::move(measured));

  fitting::FitOptions fit_options;
  fit_options.seed = options.seed;
  const std::vector<std::string> families = {"PL1", "PL4", "PL9"};
  const auto report = fitting::fit_report(dataset, families, fit_options);

  GridSpec r_grid;
  r_grid.min = r_min;
  r_grid.max = r_max;
  r_grid.points = 200;
  r_grid.log_spacing = true;
  const std::vector<double> distances = make_grid(r_grid);

  json fits = json::object();
  for (const auto& entry : report) {
    if (!entry.result) {
      fits[entry.family] = {{"error", entry.error}};
      continue;
    }
    fits[entry.family] = {
        {"rms_db", entry.result->rms_db},
        {"model", pathloss::model_to_json(entry.result->model)}};
    MetricCurve fitted{entry.family + " fit", "gain_db", "r_m",
                       {}, {}, {}, {}};
    for (const double r : distances) {
      fitted.x.push_back(r);
      fitted.value.push_back(pathloss::gain_db(entry.result->model, r));
      fitted.error.push_back(0.0);
      fitted.note.emplace_back();
    }
    curves.push_back(std::move(fitted));
  }
  meta["dataset"] = {{"path", *options.dataset_path},
                     {"points", dataset.points.size()}};
  meta["fits"] = fits;
  meta["methods"] = {"fit"};
  meta["notes"] = {"fitted curves are sampled on a 200-point log grid"};
}

}  // namespace

std::vector<std::string> reproduce_figure(const std::string& id,
                                          const FigureOptions& options) {
  std::vector<MetricCurve> curves;
  json meta;
  meta["figure"] = id;
  meta["version"] = kVersion;
  meta["seed"] = options.seed;

  if (id == "fig2") {
    build_fig2(options, curves, meta);
  } else if (id == "fig3") {
    build_fig3(options, curves, meta);
  } else if (id == "fig4") {
    build_fig4(options, curves, meta);
  } else if (id == "fig5") {
    build_fig5(options, curves, meta);
  } else if (id == "fig6") {
    build_fig6(options, curves, meta);
  } else if (id == "fig7") {
    build_fig7(options, curves, meta);
  } else if (id == "fig8") {
    build_fig8(options, curves, meta);
  } else if (id == "fig9") {
    build_fig9(options, curves, meta);
  } else {
    throw std::invalid_argument("unknown figure id: " + id +
                                " (expected fig2..fig9)");
  }

  const std::filesystem::path dir(options.output_dir);
  std::filesystem::create_directories(dir);
  const std::filesystem::path csv_path = dir / (id + ".csv");
  const std::filesystem::path json_path = dir / (id + ".json");

  std::ofstream csv(csv_path);
  if (!csv) {
    throw std::runtime_error("cannot write " + csv_path.string());
  }
  curves_to_csv(curves, csv);

  std::ofstream meta_out(json_path);
  if (!meta_out) {
    throw std::runtime_error("cannot write " + json_path.string());
  }
  meta_out << meta.dump(2) << "\n";

  return {csv_path.string(), json_path.string()};
}

}  // namespace stretchnet::sweep
