#include "stretchnet/sweep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace stretchnet::sweep {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string format_g(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

std::string sanitized(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

}  // namespace

void GridSpec::validate() const {
  if (!std::isfinite(min) || !std::isfinite(max) || !(min < max)) {
    throw std::invalid_argument("grid requires finite min < max");
  }
  if (points < 2) {
    throw std::invalid_argument("grid requires at least 2 points");
  }
  if (log_spacing && !(min > 0.0)) {
    throw std::invalid_argument("log-spaced grid requires min > 0");
  }
}

std::vector<double> make_grid(const GridSpec& grid) {
  grid.validate();
  std::vector<double> x(static_cast<std::size_t>(grid.points));
  const auto count = static_cast<double>(grid.points - 1);
  for (int i = 0; i < grid.points; ++i) {
    const double t = static_cast<double>(i) / count;
    x[static_cast<std::size_t>(i)] =
        grid.log_spacing ? grid.min * std::pow(grid.max / grid.min, t)
                         : grid.min + (grid.max - grid.min) * t;
  }
  x.front() = grid.min;
  x.back() = grid.max;
  return x;
}

std::string metric_name(Metric metric) {
  switch (metric) {
    case Metric::Coverage: return "coverage";
    case Metric::Throughput: return "throughput";
    case Metric::Ase: return "ase";
  }
  throw std::invalid_argument("unknown metric");
}

Metric metric_from_name(const std::string& name) {
  if (name == "coverage") return Metric::Coverage;
  if (name == "throughput") return Metric::Throughput;
  if (name == "ase") return Metric::Ase;
  throw std::invalid_argument("unknown metric: " + name);
}

std::string abscissa_name(Abscissa abscissa) {
  return abscissa == Abscissa::Lambda ? "lambda_per_m2" : "theta_linear";
}

Abscissa abscissa_from_name(const std::string& name) {
  if (name == "lambda" || name == "lambda_per_m2") return Abscissa::Lambda;
  if (name == "theta" || name == "theta_linear") return Abscissa::Theta;
  throw std::invalid_argument("unknown abscissa: " + name);
}

void SweepSpec::validate() const {
  grid.validate();
  if (methods.empty()) {
    throw std::invalid_argument("sweep needs at least one method");
  }
  for (const std::string& method : methods) {
    if (method != "monte-carlo") {
      static_cast<void>(analytic::method_from_name(method));  // throws
    }
  }
  if (metric == Metric::Ase && abscissa == Abscissa::Theta) {
    throw std::invalid_argument(
        "the ase metric has no threshold to sweep over");
  }
  // Validate the fixed parameters with the swept field replaced by a
  // representative grid value.
  NetworkParams probe = params;
  if (abscissa == Abscissa::Lambda) {
    probe.lambda = grid.min;
  }
  probe.validate();
  if (abscissa == Abscissa::Lambda && metric != Metric::Ase) {
    theta.validate();
  }
  const bool wants_monte_carlo =
      std::count(methods.begin(), methods.end(), "monte-carlo") > 0;
  if (wants_monte_carlo) {
    mc_spec.validate();
  }
}

namespace {

MetricCurve blank_curve(const SweepSpec& spec, const std::string& label,
                        const std::vector<double>& x) {
  MetricCurve curve;
  curve.label = label;
  curve.metric = metric_name(spec.metric);
  curve.abscissa = abscissa_name(spec.abscissa);
  curve.x = x;
  curve.value.assign(x.size(), kNan);
  curve.error.assign(x.size(), kNan);
  curve.note.assign(x.size(), "");
  return curve;
}

void fill_analytic_curve(const SweepSpec& spec, const std::vector<double>& x,
                         analytic::CoverageMethod method, MetricCurve& curve) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    NetworkParams params = spec.params;
    analytic::SirThreshold theta = spec.theta;
    if (spec.abscissa == Abscissa::Lambda) {
      params.lambda = x[i];
    } else {
      theta = analytic::SirThreshold::from_linear(x[i]);
    }
    try {
      analytic::Estimate estimate;
      switch (spec.metric) {
        case Metric::Coverage:
          estimate = analytic::coverage(params, theta, method,
                                        spec.quad_options);
          break;
        case Metric::Throughput:
          estimate = analytic::potential_throughput(params, theta, method,
                                                    spec.quad_options);
          break;
        case Metric::Ase:
          estimate = analytic::ase(params, method, spec.quad_options);
          break;
      }
      curve.value[i] = estimate.value;
      curve.error[i] = estimate.error;
    } catch (const std::exception& failure) {
      curve.note[i] = failure.what();
    }
  }
}

void fill_monte_carlo_curve(const SweepSpec& spec, const std::vector<double>& x,
                            MetricCurve& curve) {
  // A theta sweep reuses one sample set; a lambda sweep simulates per point.
  std::optional<mc::SirSampleSet> shared;
  if (spec.abscissa == Abscissa::Theta) {
    shared = mc::simulate(spec.mc_spec, spec.params);
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    NetworkParams params = spec.params;
    analytic::SirThreshold theta = spec.theta;
    if (spec.abscissa == Abscissa::Lambda) {
      params.lambda = x[i];
    } else {
      theta = analytic::SirThreshold::from_linear(x[i]);
    }
    try {
      const mc::SirSampleSet& samples =
          shared ? *shared : mc::simulate(spec.mc_spec, params);
      mc::EmpiricalEstimate estimate;
      switch (spec.metric) {
        case Metric::Coverage:
          estimate = mc::empirical_coverage(samples, theta);
          break;
        case Metric::Throughput:
          estimate = mc::empirical_potential_throughput(samples, params.lambda,
                                                        theta);
          break;
        case Metric::Ase:
          estimate = mc::empirical_ase(samples, params.lambda);
          break;
      }
      curve.value[i] = estimate.value;
      curve.error[i] = estimate.standard_error;
    } catch (const std::exception& failure) {
      curve.note[i] = failure.what();
    }
  }
}

}  // namespace

std::vector<MetricCurve> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::vector<double> x = make_grid(spec.grid);
  std::vector<MetricCurve> curves;
  curves.reserve(spec.methods.size());
  for (const std::string& method : spec.methods) {
    MetricCurve curve = blank_curve(spec, method, x);
    if (method == "monte-carlo") {
      fill_monte_carlo_curve(spec, x, curve);
    } else {
      fill_analytic_curve(spec, x, analytic::method_from_name(method), curve);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

void curves_to_csv(const std::vector<MetricCurve>& curves, std::ostream& out) {
  out << "curve,metric,abscissa,x,value,error,note\n";
  for (const MetricCurve& curve : curves) {
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
      out << sanitized(curve.label) << "," << curve.metric << ","
          << curve.abscissa << "," << format_g(curve.x[i]) << ","
          << format_g(curve.value[i]) << "," << format_g(curve.error[i])
          << "," << sanitized(curve.note[i]) << "\n";
    }
  }
}

std::vector<MetricCurve> curves_from_csv(std::istream& in) {
  std::vector<MetricCurve> curves;
  std::map<std::string, std::size_t> index;
  std::string line;
  bool header_seen = false;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line.front() == '#') {
      continue;
    }
    if (!header_seen) {
      if (line != "curve,metric,abscissa,x,value,error,note") {
        throw std::runtime_error("unexpected curve CSV header: " + line);
      }
      header_seen = true;
      continue;
    }
    std::array<std::string, 7> field;
    std::size_t start = 0;
    for (int f = 0; f < 6; ++f) {
      const auto comma = line.find(',', start);
      if (comma == std::string::npos) {
        throw std::runtime_error("line " + std::to_string(line_number) +
                                 ": expected 7 columns");
      }
      field[static_cast<std::size_t>(f)] = line.substr(start, comma - start);
      start = comma + 1;
    }
    field[6] = line.substr(start);

    const std::string& label = field[0];
    if (index.find(label) == index.end()) {
      index[label] = curves.size();
      MetricCurve curve;
      curve.label = label;
      curve.metric = field[1];
      curve.abscissa = field[2];
      curves.push_back(std::move(curve));
    }
    MetricCurve& curve = curves[index[label]];
    try {
      curve.x.push_back(std::stod(field[3]));
      curve.value.push_back(std::stod(field[4]));
      curve.error.push_back(std::stod(field[5]));
    } catch (const std::exception&) {
      throw std::runtime_error("line " + std::to_string(line_number) +
                               ": malformed number");
    }
    curve.note.push_back(field[6]);
  }
  if (!header_seen) {
    throw std::runtime_error("curve CSV is missing its header");
  }
  return curves;
}

void ThresholdSearch::validate() const {
  if (!(theta_min > 0.0) || !(theta_max > theta_min) ||
      !std::isfinite(theta_max)) {
    throw std::invalid_argument(
        "threshold search requires 0 < theta_min < theta_max, finite");
  }
  if (points < 3) {
    throw std::invalid_argument("threshold search needs at least 3 points");
  }
}

ThresholdOptimum optimal_threshold(const NetworkParams& params,
                                   const ThresholdSearch& search,
                                   analytic::CoverageMethod method,
                                   const quad::Options& quad_options) {
  search.validate();
  params.validate();

  const auto objective = [&](double theta_linear) {
    return analytic::potential_throughput(
               params, analytic::SirThreshold::from_linear(theta_linear),
               method, quad_options)
        .value;
  };

  GridSpec grid;
  grid.min = search.theta_min;
  grid.max = search.theta_max;
  grid.points = search.points;
  grid.log_spacing = true;
  const std::vector<double> thetas = make_grid(grid);

  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const double value = objective(thetas[i]);
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }

  // Local refinement between the argmax neighbors, on a log axis.
  const std::size_t lo_index = best > 0 ? best - 1 : best;
  const std::size_t hi_index =
      best + 1 < thetas.size() ? best + 1 : best;
  double lo = std::log(thetas[lo_index]);
  double hi = std::log(thetas[hi_index]);
  double best_theta = thetas[best];
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = objective(std::exp(c));
  double fd = objective(std::exp(d));
  for (int i = 0; i < 60 && hi - lo > 1e-12; ++i) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = objective(std::exp(c));
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = objective(std::exp(d));
    }
  }
  const double refined_theta = std::exp(0.5 * (lo + hi));
  const double refined_value = objective(refined_theta);
  if (refined_value > best_value) {
    best_value = refined_value;
    best_theta = refined_theta;
  }

  ThresholdOptimum optimum;
  optimum.theta_star = analytic::SirThreshold::from_linear(best_theta);
  optimum.throughput = best_value;
  optimum.boundary = best == 0 || best + 1 == thetas.size();
  return optimum;
}

}  // namespace stretchnet::sweep
