// stretchnet: analytic and simulated performance of dense downlink
// networks under stretched-exponential attenuation, plus path-loss
// fitting and figure-data export.
//
// Units at this boundary: densities in BS/km^2, thresholds in dB,
// distances in meters.  The library underneath works in SI (BS/m^2,
// linear ratios).
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stretchnet/errors.hpp"
#include "stretchnet/fitting.hpp"
#include "stretchnet/sweep.hpp"
#include "stretchnet/version.hpp"

namespace {

using nlohmann::json;
namespace analytic = stretchnet::analytic;
namespace fitting = stretchnet::fitting;
namespace mc = stretchnet::mc;
namespace sweep = stretchnet::sweep;

constexpr double kPerKm2 = 1e-6;  // BS/km^2 -> BS/m^2
constexpr std::uint64_t kDefaultSeed = 20260814;

// ---------------------------------------------------------------------
// Configuration file: a versioned JSON document whose top level may hold
// a "seed" and one section per subcommand; flags override sections, and
// sections override the STRETCHNET_SEED environment variable.
class ConfigView {
 public:
  void load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
      throw std::invalid_argument("cannot open config file: " + path);
    }
    try {
      root_ = json::parse(in);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument("config file " + path + ": " + e.what());
    }
    if (!root_.is_object()) {
      throw std::invalid_argument("config file " + path +
                                  " must hold a JSON object");
    }
    const int version = root_.value("schema_version", 1);
    if (version != 1) {
      throw std::invalid_argument(
          "config schema_version " + std::to_string(version) +
          " is not supported (expected 1)");
    }
  }

  template <typename T>
  std::optional<T> get(const std::string& section,
                       const std::string& key) const {
    if (!root_.is_object()) {
      return std::nullopt;
    }
    const auto sec = root_.find(section);
    if (sec == root_.end() || !sec->is_object()) {
      return std::nullopt;
    }
    const auto entry = sec->find(key);
    if (entry == sec->end()) {
      return std::nullopt;
    }
    try {
      return entry->get<T>();
    } catch (const json::type_error&) {
      throw std::invalid_argument("config entry " + section + "." + key +
                                  " has the wrong type");
    }
  }

  std::optional<std::uint64_t> top_level_seed() const {
    if (root_.is_object() && root_.contains("seed")) {
      return root_.at("seed").get<std::uint64_t>();
    }
    return std::nullopt;
  }

 private:
  json root_;
};

// Resolution order: built-in default < STRETCHNET_SEED (seed only)
// < config section < explicit flag.
template <typename T>
T resolve(const std::optional<T>& flag, const ConfigView& config,
          const std::string& section, const std::string& key, T fallback) {
  if (flag) {
    return *flag;
  }
  if (auto from_config = config.get<T>(section, key)) {
    return *from_config;
  }
  return fallback;
}

template <typename T>
T resolve_required(const std::optional<T>& flag, const ConfigView& config,
                   const std::string& section, const std::string& key,
                   const std::string& flag_name) {
  if (flag) {
    return *flag;
  }
  if (auto from_config = config.get<T>(section, key)) {
    return *from_config;
  }
  throw std::invalid_argument("missing " + flag_name + " (or config entry " +
                              section + "." + key + ")");
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag,
                           const ConfigView& config,
                           const std::string& section) {
  if (flag) {
    return *flag;
  }
  if (auto section_seed = config.get<std::uint64_t>(section, "seed")) {
    return *section_seed;
  }
  if (auto top = config.top_level_seed()) {
    return *top;
  }
  if (const char* env = std::getenv("STRETCHNET_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument(
          "STRETCHNET_SEED must be a non-negative integer, got: " +
          std::string(env));
    }
  }
  return kDefaultSeed;
}

// ---------------------------------------------------------------------
// Shared flag bundles.

struct ParamFlags {
  std::optional<double> lambda_km2;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> n0;

  // Required-ness is enforced at resolution time, not parse time, so a
  // config file may supply any of these.
  void attach(CLI::App* cmd) {
    cmd->add_option("--lambda", lambda_km2, "BS density in BS/km^2");
    cmd->add_option("--alpha", alpha, "attenuation scale, units m^-beta");
    cmd->add_option("--beta", beta,
                    "attenuation distance exponent, in (0, 2]");
    cmd->add_option("--n0", n0,
                    "average noise power relative to unit transmit power "
                    "(default 0: interference-limited)");
  }

  stretchnet::NetworkParams resolve_params(const ConfigView& config,
                                           const std::string& section,
                                           bool lambda_required) const {
    stretchnet::NetworkParams params;
    if (lambda_required) {
      params.lambda =
          resolve_required(lambda_km2, config, section, "lambda", "--lambda") *
          kPerKm2;
    } else {
      params.lambda =
          resolve(lambda_km2, config, section, "lambda", 0.0) * kPerKm2;
    }
    params.alpha = resolve_required(alpha, config, section, "alpha", "--alpha");
    params.beta = resolve_required(beta, config, section, "beta", "--beta");
    params.n0 = resolve(n0, config, section, "n0", 0.0);
    return params;
  }
};

struct McFlags {
  std::optional<double> outer_km;
  std::optional<double> inner_km;
  std::optional<std::int64_t> realizations;
  std::optional<int> users;
  std::optional<std::uint64_t> seed;
  std::optional<double> noise_power;
  std::optional<unsigned> workers;

  void attach(CLI::App* cmd) {
    cmd->add_option("--outer-km", outer_km,
                    "side of the square deployment region, km");
    cmd->add_option("--inner-km", inner_km,
                    "side of the centered user window, km");
    cmd->add_option("--realizations", realizations,
                    "independent network draws");
    cmd->add_option("--users", users, "users per realization");
    cmd->add_option("--seed", seed, "master seed (see also STRETCHNET_SEED)");
    cmd->add_option("--noise-power", noise_power,
                    "include noise at this average power");
    cmd->add_option("--workers", workers, "worker threads (0 = hardware)");
  }

  mc::SimulationSpec resolve_spec(const ConfigView& config,
                                  const std::string& section) const {
    mc::SimulationSpec spec;
    spec.outer_region_km =
        resolve(outer_km, config, section, "outer_km", spec.outer_region_km);
    spec.inner_region_km =
        resolve(inner_km, config, section, "inner_km", spec.inner_region_km);
    spec.realizations = resolve(realizations, config, section, "realizations",
                                spec.realizations);
    spec.users_per_realization =
        resolve(users, config, section, "users", spec.users_per_realization);
    spec.master_seed = resolve_seed(seed, config, section);
    const double noise =
        resolve(noise_power, config, section, "noise_power", 0.0);
    spec.include_noise = noise > 0.0;
    spec.noise_power = noise;
    spec.workers = resolve(workers, config, section, "workers", 0u);
    return spec;
  }
};

void emit(const json& payload, const std::optional<std::string>& path) {
  if (path && *path != "-") {
    std::ofstream out(*path);
    if (!out) {
      throw std::runtime_error("cannot write " + *path);
    }
    out << payload.dump(2) << "\n";
  } else {
    std::cout << payload.dump(2) << "\n";
  }
}

json params_to_json(const stretchnet::NetworkParams& params) {
  return json{{"lambda_per_km2", params.lambda / kPerKm2},
              {"lambda_per_m2", params.lambda},
              {"alpha", params.alpha},
              {"beta", params.beta},
              {"n0", params.n0}};
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

// ---------------------------------------------------------------------

int run(int argc, char** argv) {
  CLI::App app{
      "stretchnet: coverage, throughput, and area spectral efficiency of "
      "Poisson cellular networks under stretched-exponential attenuation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("stretchnet ") +
                                        stretchnet::kVersion);

  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON config file; flags override its sections");

  ConfigView config;

  // --- point metrics ---------------------------------------------------
  auto* coverage_cmd = app.add_subcommand(
      "coverage", "coverage probability P(SIR >= theta)");
  auto* throughput_cmd = app.add_subcommand(
      "throughput", "potential throughput lambda log2(1+theta) P_cov");
  auto* ase_cmd = app.add_subcommand(
      "ase", "area spectral efficiency lambda E[log2(1+SIR)]");

  struct PointState {
    ParamFlags params;
    std::optional<double> theta_db;
    std::optional<std::string> method;
    std::optional<std::string> output;
  };
  PointState cov_state, tput_state, ase_state;
  for (auto [cmd, state] : {std::pair{coverage_cmd, &cov_state},
                            std::pair{throughput_cmd, &tput_state},
                            std::pair{ase_cmd, &ase_state}}) {
    state->params.attach(cmd);
    if (cmd != ase_cmd) {
      cmd->add_option("--theta-db", state->theta_db, "SIR threshold in dB");
    }
    cmd->add_option("--method", state->method,
                    "auto|general|polylog|beta1|beta2|upper-three-term|"
                    "upper-polylog|upper-log|lower-jensen");
    cmd->add_option("--output", state->output, "output JSON path (- = stdout)");
  }

  // --- simulate ---------------------------------------------------------
  auto* simulate_cmd = app.add_subcommand(
      "simulate", "Monte Carlo SIR samples for the network protocol");
  ParamFlags sim_params;
  McFlags sim_mc;
  std::optional<double> sim_theta_db;
  std::optional<std::string> sim_samples_out;
  std::optional<std::string> sim_summary_out;
  sim_params.attach(simulate_cmd);
  sim_mc.attach(simulate_cmd);
  simulate_cmd->add_option("--theta-db", sim_theta_db,
                           "threshold for the summary's empirical coverage");
  simulate_cmd->add_option("--samples", sim_samples_out,
                           "write the raw SIR samples CSV here (- = stdout)");
  simulate_cmd->add_option("--output", sim_summary_out,
                           "summary JSON path (- = stdout)");

  // --- fit ----------------------------------------------------------------
  auto* fit_cmd = app.add_subcommand(
      "fit", "least-squares path-loss fits of measured gains");
  std::optional<std::string> fit_data;
  std::optional<std::string> fit_families;
  std::optional<int> fit_starts;
  std::optional<std::uint64_t> fit_seed;
  std::optional<double> fit_fixed_beta;
  std::optional<std::string> fit_beta_choices;
  std::optional<std::string> fit_csv_out;
  std::optional<std::string> fit_output;
  fit_cmd->add_option("--data", fit_data,
                      "measured dataset CSV (r_m,gain_db header)");
  fit_cmd->add_option("--families", fit_families,
                      "comma list among PL1..PL10 (default: all)");
  fit_cmd->add_option("--starts", fit_starts, "multi-start count");
  fit_cmd->add_option("--seed", fit_seed, "start-jitter seed");
  fit_cmd->add_option("--fixed-beta", fit_fixed_beta,
                      "pin beta (families with a beta parameter)");
  fit_cmd->add_option("--beta-choices", fit_beta_choices,
                      "comma list of betas; the best one wins");
  fit_cmd->add_option("--csv", fit_csv_out, "also write the report as CSV");
  fit_cmd->add_option("--output", fit_output,
                      "report JSON path (- = stdout)");

  // --- sweep ----------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "evaluate a metric over a lambda or theta grid");
  ParamFlags sweep_params;
  McFlags sweep_mc;
  std::optional<std::string> sweep_metric;
  std::optional<std::string> sweep_abscissa;
  std::optional<double> sweep_min;
  std::optional<double> sweep_max;
  std::optional<int> sweep_points;
  std::optional<std::string> sweep_spacing;
  std::optional<double> sweep_theta_db;
  std::optional<std::string> sweep_methods;
  std::optional<std::string> sweep_output;
  sweep_params.attach(sweep_cmd);
  sweep_mc.attach(sweep_cmd);
  sweep_cmd->add_option("--metric", sweep_metric,
                        "coverage|throughput|ase");
  sweep_cmd->add_option("--abscissa", sweep_abscissa, "lambda|theta");
  sweep_cmd->add_option("--min", sweep_min,
                        "grid start (BS/km^2 for lambda, dB for theta)");
  sweep_cmd->add_option("--max", sweep_max,
                        "grid end (BS/km^2 for lambda, dB for theta)");
  sweep_cmd->add_option("--points", sweep_points, "grid size");
  sweep_cmd->add_option("--spacing", sweep_spacing, "log|linear (default log)");
  sweep_cmd->add_option("--theta-db", sweep_theta_db,
                        "fixed threshold for lambda sweeps");
  sweep_cmd->add_option("--methods", sweep_methods,
                        "comma list of methods, may include monte-carlo");
  sweep_cmd->add_option("--output", sweep_output,
                        "curves CSV path (- = stdout)");

  // --- optimal-theta --------------------------------------------------------
  auto* opt_cmd = app.add_subcommand(
      "optimal-theta", "threshold maximizing the potential throughput");
  ParamFlags opt_params;
  std::optional<double> opt_min_db;
  std::optional<double> opt_max_db;
  std::optional<int> opt_points;
  std::optional<std::string> opt_method;
  std::optional<std::string> opt_output;
  opt_params.attach(opt_cmd);
  opt_cmd->add_option("--theta-min-db", opt_min_db,
                      "search range start (default -15)");
  opt_cmd->add_option("--theta-max-db", opt_max_db,
                      "search range end (default 15)");
  opt_cmd->add_option("--points", opt_points, "search grid size (default 61)");
  opt_cmd->add_option("--method", opt_method, "coverage method");
  opt_cmd->add_option("--output", opt_output, "JSON path (- = stdout)");

  // --- figure -----------------------------------------------------------------
  auto* figure_cmd = app.add_subcommand(
      "figure", "write the data (CSV + JSON metadata) behind fig2..fig9");
  std::string figure_id;
  std::optional<std::string> figure_dir;
  std::optional<std::string> figure_dataset;
  std::optional<double> figure_norm_db;
  std::optional<std::int64_t> figure_realizations;
  std::optional<unsigned> figure_workers;
  std::optional<std::uint64_t> figure_seed;
  figure_cmd->add_option("id", figure_id, "figure id, fig2..fig9")
      ->required();
  figure_cmd->add_option("--output-dir", figure_dir,
                         "directory for <id>.csv and <id>.json");
  figure_cmd->add_option("--dataset", figure_dataset,
                         "measured dataset CSV (fig2)");
  figure_cmd->add_option("--normalization-db", figure_norm_db,
                         "gain at 1 km shared by fig4's curves");
  figure_cmd->add_option("--realizations", figure_realizations,
                         "Monte Carlo realizations override");
  figure_cmd->add_option("--workers", figure_workers,
                         "worker threads (0 = hardware)");
  figure_cmd->add_option("--seed", figure_seed, "master seed");

  // Let `stretchnet <sub> --config f.json` reach the parent's --config.
  for (CLI::App* sub : app.get_subcommands(
           [](const CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; real parse problems exit 2.
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (!config_path.empty()) {
    config.load(config_path);
  }

  // --- dispatch -----------------------------------------------------------
  for (auto [cmd, state, section] :
       {std::tuple{coverage_cmd, &cov_state, "coverage"},
        std::tuple{throughput_cmd, &tput_state, "throughput"},
        std::tuple{ase_cmd, &ase_state, "ase"}}) {
    if (!cmd->parsed()) {
      continue;
    }
    const auto params = state->params.resolve_params(config, section, true);
    const auto method = analytic::method_from_name(
        resolve<std::string>(state->method, config, section, "method",
                             "auto"));
    json out;
    out["params"] = params_to_json(params);
    out["method"] = analytic::method_name(method);
    if (cmd == ase_cmd) {
      const auto estimate = analytic::ase(params, method);
      out["ase_per_m2"] = estimate.value;
      out["ase_per_km2"] = estimate.value / kPerKm2;
      out["quadrature_error"] = estimate.error;
    } else {
      const double theta_db =
          resolve(state->theta_db, config, section, "theta_db", 0.0);
      const auto theta = analytic::SirThreshold::from_db(theta_db);
      out["theta_db"] = theta_db;
      if (cmd == coverage_cmd) {
        const auto estimate = analytic::coverage(params, theta, method);
        out["coverage"] = estimate.value;
        out["quadrature_error"] = estimate.error;
      } else {
        const auto estimate =
            analytic::potential_throughput(params, theta, method);
        out["throughput_per_m2"] = estimate.value;
        out["throughput_per_km2"] = estimate.value / kPerKm2;
        out["quadrature_error"] = estimate.error;
      }
    }
    emit(out, state->output);
  }

  if (simulate_cmd->parsed()) {
    const auto params = sim_params.resolve_params(config, "simulate", true);
    const auto spec = sim_mc.resolve_spec(config, "simulate");
    const auto set = mc::simulate(spec, params);

    if (sim_samples_out) {
      if (*sim_samples_out == "-") {
        mc::write_samples_csv(set, std::cout);
      } else {
        std::ofstream out(*sim_samples_out);
        if (!out) {
          throw std::runtime_error("cannot write " + *sim_samples_out);
        }
        mc::write_samples_csv(set, out);
      }
    }

    const double theta_db =
        resolve(sim_theta_db, config, "simulate", "theta_db", 0.0);
    const auto theta = analytic::SirThreshold::from_db(theta_db);
    const auto coverage = mc::empirical_coverage(set, theta);
    const auto throughput =
        mc::empirical_potential_throughput(set, params.lambda, theta);
    const auto ase = mc::empirical_ase(set, params.lambda);
    json out;
    out["params"] = params_to_json(params);
    out["spec"] = {{"outer_region_km", spec.outer_region_km},
                   {"inner_region_km", spec.inner_region_km},
                   {"realizations", spec.realizations},
                   {"users_per_realization", spec.users_per_realization},
                   {"master_seed", spec.master_seed},
                   {"include_noise", spec.include_noise},
                   {"noise_power", spec.noise_power},
                   {"workers", spec.workers}};
    out["samples"] = set.samples.size();
    out["redraws"] = set.redraws;
    out["theta_db"] = theta_db;
    out["empirical"] = {
        {"coverage", coverage.value},
        {"coverage_se", coverage.standard_error},
        {"throughput_per_m2", throughput.value},
        {"throughput_se", throughput.standard_error},
        {"ase_per_m2", ase.value},
        {"ase_se", ase.standard_error}};
    if (!sim_samples_out || *sim_samples_out != "-") {
      emit(out, sim_summary_out);
    }
  }

  if (fit_cmd->parsed()) {
    const auto data_path = resolve_required<std::string>(
        fit_data, config, "fit", "data", "--data");
    std::ifstream in(data_path);
    if (!in) {
      throw std::invalid_argument("cannot open dataset: " + data_path);
    }
    const auto dataset = fitting::dataset_from_csv(in, data_path);

    fitting::FitOptions options;
    options.starts = resolve(fit_starts, config, "fit", "starts",
                             options.starts);
    options.seed = resolve_seed(fit_seed, config, "fit");
    if (fit_fixed_beta) {
      options.fixed_beta = *fit_fixed_beta;
    } else if (auto pinned = config.get<double>("fit", "fixed_beta")) {
      options.fixed_beta = *pinned;
    }
    if (fit_beta_choices) {
      std::vector<double> choices;
      for (const auto& token : split_list(*fit_beta_choices)) {
        choices.push_back(std::stod(token));
      }
      options.beta_choices = std::move(choices);
    }

    const auto families = split_list(resolve<std::string>(
        fit_families, config, "fit", "families",
        "PL1,PL2,PL3,PL4,PL5,PL6,PL7,PL8,PL9,PL10"));
    const auto report = fitting::fit_report(dataset, families, options);

    if (fit_csv_out) {
      std::ofstream out(*fit_csv_out);
      if (!out) {
        throw std::runtime_error("cannot write " + *fit_csv_out);
      }
      fitting::report_to_csv(report, out);
    }
    json out;
    out["dataset"] = {{"path", data_path},
                      {"points", dataset.points.size()}};
    out["report"] = fitting::report_to_json(report);
    emit(out, fit_output);
  }

  if (sweep_cmd->parsed()) {
    sweep::SweepSpec spec;
    spec.metric = sweep::metric_from_name(
        resolve<std::string>(sweep_metric, config, "sweep", "metric",
                             "coverage"));
    spec.abscissa = sweep::abscissa_from_name(
        resolve<std::string>(sweep_abscissa, config, "sweep", "abscissa",
                             "lambda"));
    const double grid_min =
        resolve_required(sweep_min, config, "sweep", "min", "--min");
    const double grid_max =
        resolve_required(sweep_max, config, "sweep", "max", "--max");
    if (spec.abscissa == sweep::Abscissa::Lambda) {
      spec.grid.min = grid_min * kPerKm2;
      spec.grid.max = grid_max * kPerKm2;
    } else {
      spec.grid.min = std::pow(10.0, grid_min / 10.0);
      spec.grid.max = std::pow(10.0, grid_max / 10.0);
    }
    spec.grid.points = resolve(sweep_points, config, "sweep", "points", 41);
    const auto spacing = resolve<std::string>(sweep_spacing, config, "sweep",
                                              "spacing", "log");
    if (spacing == "log") {
      spec.grid.log_spacing = true;
    } else if (spacing == "linear") {
      spec.grid.log_spacing = false;
    } else {
      throw std::invalid_argument("--spacing must be log or linear, got " +
                                  spacing);
    }
    const bool lambda_abscissa = spec.abscissa == sweep::Abscissa::Lambda;
    spec.params =
        sweep_params.resolve_params(config, "sweep", !lambda_abscissa);
    spec.theta = analytic::SirThreshold::from_db(
        resolve(sweep_theta_db, config, "sweep", "theta_db", 0.0));
    spec.methods = split_list(resolve<std::string>(
        sweep_methods, config, "sweep", "methods", "auto"));
    spec.mc_spec = sweep_mc.resolve_spec(config, "sweep");

    const auto curves = sweep::run_sweep(spec);
    if (sweep_output && *sweep_output != "-") {
      std::ofstream out(*sweep_output);
      if (!out) {
        throw std::runtime_error("cannot write " + *sweep_output);
      }
      sweep::curves_to_csv(curves, out);
    } else {
      sweep::curves_to_csv(curves, std::cout);
    }
  }

  if (opt_cmd->parsed()) {
    const auto params =
        opt_params.resolve_params(config, "optimal-theta", true);
    sweep::ThresholdSearch search;
    search.theta_min = std::pow(
        10.0,
        resolve(opt_min_db, config, "optimal-theta", "theta_min_db", -15.0) /
            10.0);
    search.theta_max = std::pow(
        10.0,
        resolve(opt_max_db, config, "optimal-theta", "theta_max_db", 15.0) /
            10.0);
    search.points =
        resolve(opt_points, config, "optimal-theta", "points", 61);
    const auto method = analytic::method_from_name(resolve<std::string>(
        opt_method, config, "optimal-theta", "method", "auto"));
    const auto optimum = sweep::optimal_threshold(params, search, method);
    json out;
    out["params"] = params_to_json(params);
    out["method"] = analytic::method_name(method);
    out["theta_star_db"] = optimum.theta_star.db();
    out["theta_star_linear"] = optimum.theta_star.linear;
    out["throughput_per_m2"] = optimum.throughput;
    out["throughput_per_km2"] = optimum.throughput / kPerKm2;
    out["boundary"] = optimum.boundary;
    if (optimum.boundary) {
      std::cerr << "stretchnet: warning: the optimum sits on the search "
                   "boundary; widen --theta-min-db/--theta-max-db\n";
    }
    emit(out, opt_output);
  }

  if (figure_cmd->parsed()) {
    sweep::FigureOptions options;
    options.output_dir =
        resolve<std::string>(figure_dir, config, "figure", "output_dir", ".");
    options.seed = resolve_seed(figure_seed, config, "figure");
    if (figure_dataset) {
      options.dataset_path = *figure_dataset;
    } else if (auto from_config =
                   config.get<std::string>("figure", "dataset")) {
      options.dataset_path = *from_config;
    }
    options.normalization_db =
        resolve(figure_norm_db, config, "figure", "normalization_db",
                options.normalization_db);
    if (figure_realizations) {
      options.realizations = *figure_realizations;
    } else if (auto from_config =
                   config.get<std::int64_t>("figure", "realizations")) {
      options.realizations = *from_config;
    }
    if (figure_workers) {
      options.workers = *figure_workers;
    } else if (auto from_config =
                   config.get<unsigned>("figure", "workers")) {
      options.workers = *from_config;
    }
    for (const auto& path : sweep::reproduce_figure(figure_id, options)) {
      std::cout << path << "\n";
    }
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const stretchnet::numerical_error& e) {
    std::cerr << "stretchnet: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "stretchnet: invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "stretchnet: invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "stretchnet: failure: " << e.what() << "\n";
    return 3;
  }
}
