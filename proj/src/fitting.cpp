#include "stretchnet/fitting.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "stretchnet/rng.hpp"

namespace stretchnet::fitting {

namespace pl = stretchnet::pathloss;

namespace {

constexpr double kLn10Over10 = 0.23025850929940457;

std::string format_g(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

std::string trimmed(const std::string& line) {
  const auto begin = line.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return {};
  }
  const auto end = line.find_last_not_of(" \t\r");
  return line.substr(begin, end - begin + 1);
}

// Families by parameter count, for the identifiability precondition.
int parameter_count(const std::string& family) {
  static const std::map<std::string, int> counts = {
      {"PL1", 3}, {"PL2", 4}, {"PL3", 3}, {"PL4", 2}, {"PL5", 2},
      {"PL6", 4}, {"PL7", 2}, {"PL8", 2}, {"PL9", 2}, {"PL10", 4}};
  const auto it = counts.find(family);
  if (it == counts.end()) {
    throw std::invalid_argument("unknown path loss family: " + family);
  }
  return it->second;
}

bool family_has_beta(const std::string& family) {
  return family == "PL1" || family == "PL2" || family == "PL10";
}

// Points sorted by (r, gain) so every downstream computation is invariant
// to the input order of the dataset.
std::vector<MeasurementDataset::Point> sorted_points(
    const MeasurementDataset& dataset) {
  auto points = dataset.points;
  std::sort(points.begin(), points.end(),
            [](const MeasurementDataset::Point& a,
               const MeasurementDataset::Point& b) {
              return a.r_m != b.r_m ? a.r_m < b.r_m : a.gain_db < b.gain_db;
            });
  return points;
}

double rms_over(const std::vector<MeasurementDataset::Point>& points,
                const pl::PathLossModel& model) {
  double sum_sq = 0.0;
  for (const auto& point : points) {
    const double residual = pl::gain_db(model, point.r_m) - point.gain_db;
    sum_sq += residual * residual;
  }
  return std::sqrt(sum_sq / static_cast<double>(points.size()));
}

// ---------------------------------------------------------------------
// Derivative-free simplex minimization (Nelder-Mead with the standard
// reflection/expansion/contraction/shrink coefficients).

struct SimplexOutcome {
  Eigen::VectorXd x;
  double f = std::numeric_limits<double>::infinity();
  long iterations = 0;
  bool converged = false;
};

SimplexOutcome nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& start, double step, int max_iterations,
    double tolerance) {
  const auto n = static_cast<int>(start.size());
  std::vector<Eigen::VectorXd> vertex(static_cast<std::size_t>(n) + 1, start);
  std::vector<double> value(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i < n; ++i) {
    vertex[static_cast<std::size_t>(i) + 1][i] += step;
  }
  for (std::size_t i = 0; i < vertex.size(); ++i) {
    value[i] = objective(vertex[i]);
  }

  auto order = [&] {
    std::vector<std::size_t> index(vertex.size());
    for (std::size_t i = 0; i < index.size(); ++i) {
      index[i] = i;
    }
    std::sort(index.begin(), index.end(),
              [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
    std::vector<Eigen::VectorXd> new_vertex;
    std::vector<double> new_value;
    new_vertex.reserve(vertex.size());
    new_value.reserve(vertex.size());
    for (const std::size_t i : index) {
      new_vertex.push_back(vertex[i]);
      new_value.push_back(value[i]);
    }
    vertex = std::move(new_vertex);
    value = std::move(new_value);
  };

  SimplexOutcome outcome;
  order();
  const std::size_t worst = static_cast<std::size_t>(n);
  for (long iteration = 0; iteration < max_iterations; ++iteration) {
    outcome.iterations = iteration + 1;
    const double f_spread = value[worst] - value[0];
    double x_spread = 0.0;
    for (std::size_t i = 1; i <= worst; ++i) {
      x_spread = std::max(
          x_spread, (vertex[i] - vertex[0]).cwiseAbs().maxCoeff());
    }
    if (f_spread <= tolerance * (1.0 + std::abs(value[0])) &&
        x_spread <= 1e-8) {
      outcome.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < worst; ++i) {
      centroid += vertex[i];
    }
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd reflected = centroid + (centroid - vertex[worst]);
    const double f_reflected = objective(reflected);
    if (f_reflected < value[0]) {
      const Eigen::VectorXd expanded =
          centroid + 2.0 * (centroid - vertex[worst]);
      const double f_expanded = objective(expanded);
      if (f_expanded < f_reflected) {
        vertex[worst] = expanded;
        value[worst] = f_expanded;
      } else {
        vertex[worst] = reflected;
        value[worst] = f_reflected;
      }
    } else if (f_reflected < value[worst - 1]) {
      vertex[worst] = reflected;
      value[worst] = f_reflected;
    } else if (f_reflected < value[worst]) {
      const Eigen::VectorXd outside =
          centroid + 0.5 * (reflected - centroid);
      const double f_outside = objective(outside);
      if (f_outside <= f_reflected) {
        vertex[worst] = outside;
        value[worst] = f_outside;
      } else {
        for (std::size_t i = 1; i <= worst; ++i) {
          vertex[i] = vertex[0] + 0.5 * (vertex[i] - vertex[0]);
          value[i] = objective(vertex[i]);
        }
      }
    } else {
      const Eigen::VectorXd inside = centroid - 0.5 * (centroid - vertex[worst]);
      const double f_inside = objective(inside);
      if (f_inside < value[worst]) {
        vertex[worst] = inside;
        value[worst] = f_inside;
      } else {
        for (std::size_t i = 1; i <= worst; ++i) {
          vertex[i] = vertex[0] + 0.5 * (vertex[i] - vertex[0]);
          value[i] = objective(vertex[i]);
        }
      }
    }
    order();
  }
  outcome.x = vertex[0];
  outcome.f = value[0];
  return outcome;
}

// ---------------------------------------------------------------------
// Data-driven start heuristics.

// Solves (r2^b - r1^b)/(r3^b - r1^b) = target for b; the ratio decreases
// monotonically in b, so bisection applies.  Recovers the stretch exponent
// exactly on noiseless stretched-exponential data.
double estimate_beta(double r1, double r2, double r3, double target) {
  const auto ratio = [&](double b) {
    return (std::pow(r2, b) - std::pow(r1, b)) /
           (std::pow(r3, b) - std::pow(r1, b));
  };
  double lo = 1e-3;
  double hi = 8.0;
  if (!(target < ratio(lo)) || !(target > ratio(hi))) {
    return 1.0;
  }
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (ratio(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Codec {
  int dim = 0;
  std::function<pl::PathLossModel(const Eigen::VectorXd&)> decode;
  Eigen::VectorXd center;
};

Codec make_codec(const std::string& family,
                 const std::vector<MeasurementDataset::Point>& points,
                 const std::optional<double>& fixed_beta) {
  const double r_min = points.front().r_m;
  const double r_max = points.back().r_m;
  const double g_min_r = points.front().gain_db;
  const double g_max_r = points.back().gain_db;

  // A representative interior point for curvature probing.
  const double r_geo = std::sqrt(r_min * r_max);
  std::size_t mid_index = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double gap = std::abs(std::log(points[i].r_m / r_geo));
    if (gap < best_gap) {
      best_gap = gap;
      mid_index = i;
    }
  }
  const double r_mid = points[mid_index].r_m;
  const double g_mid = points[mid_index].gain_db;

  const double drop_total = std::max(1.0, g_min_r - g_max_r);
  const double drop_mid = std::max(0.01, g_min_r - g_mid);

  // Log-log slope estimate for power-law-style families.
  const double eta0 = std::max(
      0.25, drop_total / std::max(1e-6, 10.0 * std::log10(r_max / r_min)));

  double beta0 = fixed_beta.value_or(1.0);
  if (!fixed_beta && family_has_beta(family) && r_mid > r_min &&
      r_mid < r_max) {
    beta0 = estimate_beta(r_min, r_mid, r_max, drop_mid / drop_total);
  }
  const double alpha0 = std::max(
      1e-8, drop_total * kLn10Over10 /
                (std::pow(r_max, beta0) - std::pow(r_min, beta0)));
  const double alpha0_b1 =
      std::max(1e-8, drop_total * kLn10Over10 / (r_max - r_min));
  const double ln_gain_min_r = kLn10Over10 * g_min_r;

  Codec codec;
  const bool pin_beta = fixed_beta.has_value();
  if (family == "PL1" || family == "PL2") {
    const bool with_eta = family == "PL2";
    const int beta_slot = 2;
    codec.dim = 2 + (pin_beta ? 0 : 1) + (with_eta ? 1 : 0);
    codec.center = Eigen::VectorXd(codec.dim);
    codec.center[0] = ln_gain_min_r + alpha0 * std::pow(r_min, beta0);
    codec.center[1] = std::log(alpha0);
    int slot = 2;
    if (!pin_beta) {
      codec.center[slot++] = std::log(beta0);
    }
    if (with_eta) {
      codec.center[slot] = std::log(0.25);
    }
    const double beta_fixed = beta0;
    codec.decode = [with_eta, pin_beta, beta_fixed,
                    beta_slot](const Eigen::VectorXd& x) -> pl::PathLossModel {
      const double beta =
          pin_beta ? beta_fixed : std::exp(x[beta_slot]);
      const int eta_slot = pin_beta ? 2 : 3;
      if (with_eta) {
        return pl::PL2{std::exp(x[0]), std::exp(x[1]), beta,
                       std::exp(x[eta_slot])};
      }
      return pl::PL1{std::exp(x[0]), std::exp(x[1]), beta};
    };
  } else if (family == "PL3") {
    codec.dim = 3;
    codec.center = Eigen::VectorXd(3);
    codec.center[0] =
        ln_gain_min_r + alpha0_b1 * r_min + 1.0 * std::log(r_min);
    codec.center[1] = std::log(alpha0_b1);
    codec.center[2] = std::log(1.0);
    codec.decode = [](const Eigen::VectorXd& x) -> pl::PathLossModel {
      return pl::PL3{std::exp(x[0]), std::exp(x[1]), std::exp(x[2])};
    };
  } else if (family == "PL4" || family == "PL5") {
    const bool capped = family == "PL5";
    codec.dim = 2;
    codec.center = Eigen::VectorXd(2);
    codec.center[0] = ln_gain_min_r + alpha0_b1 * r_min + 2.0 * std::log(r_min);
    codec.center[1] = std::log(alpha0_b1);
    codec.decode = [capped](const Eigen::VectorXd& x) -> pl::PathLossModel {
      if (capped) {
        return pl::PL5{std::exp(x[0]), std::exp(x[1])};
      }
      return pl::PL4{std::exp(x[0]), std::exp(x[1])};
    };
  } else if (family == "PL7" || family == "PL8" || family == "PL9") {
    codec.dim = 2;
    codec.center = Eigen::VectorXd(2);
    if (family == "PL7") {
      codec.center[0] = ln_gain_min_r + eta0 * std::log1p(r_min);
    } else if (family == "PL8") {
      codec.center[0] = ln_gain_min_r + std::log1p(std::pow(r_min, eta0));
    } else {
      codec.center[0] = ln_gain_min_r + eta0 * std::log(r_min);
    }
    codec.center[1] = std::log(eta0);
    const int which = family == "PL7" ? 7 : (family == "PL8" ? 8 : 9);
    codec.decode = [which](const Eigen::VectorXd& x) -> pl::PathLossModel {
      const double a = std::exp(x[0]);
      const double eta = std::exp(x[1]);
      if (which == 7) {
        return pl::PL7{a, eta};
      }
      if (which == 8) {
        return pl::PL8{a, eta};
      }
      return pl::PL9{a, eta};
    };
  } else if (family == "PL10") {
    codec.dim = pin_beta ? 3 : 4;
    codec.center = Eigen::VectorXd(codec.dim);
    codec.center[0] = std::log(alpha0);
    int slot = 1;
    if (!pin_beta) {
      codec.center[slot++] = std::log(beta0);
    }
    codec.center[slot++] = std::log(eta0);
    codec.center[slot] = std::log(r_geo);
    const double beta_fixed = beta0;
    codec.decode = [pin_beta,
                    beta_fixed](const Eigen::VectorXd& x) -> pl::PathLossModel {
      int slot = 1;
      const double beta = pin_beta ? beta_fixed : std::exp(x[slot++]);
      const double eta = std::exp(x[slot++]);
      const double r_switch = std::exp(x[slot]);
      return pl::PL10{std::exp(x[0]), beta, eta, r_switch};
    };
  } else {
    throw std::invalid_argument("no simplex codec for family " + family);
  }
  return codec;
}

FitResult fit_with_simplex(const std::string& family,
                           const std::vector<MeasurementDataset::Point>& points,
                           const FitOptions& options,
                           const std::optional<double>& fixed_beta) {
  const Codec codec = make_codec(family, points, fixed_beta);
  const auto objective = [&](const Eigen::VectorXd& x) {
    const pl::PathLossModel model = codec.decode(x);
    const double rms = rms_over(points, model);
    return std::isfinite(rms) ? rms : 1e300;
  };

  FitResult best;
  best.rms_db = std::numeric_limits<double>::infinity();
  const auto family_tag =
      static_cast<std::uint32_t>(parameter_count(family));
  for (int start = 0; start < std::max(1, options.starts); ++start) {
    Eigen::VectorXd x0 = codec.center;
    if (start > 0) {
      rng::CounterStream jitter(options.seed,
                                static_cast<std::uint32_t>(start), family_tag);
      for (int i = 0; i < codec.dim; ++i) {
        x0[i] += jitter.uniform(-2.0, 2.0);
      }
    }
    const SimplexOutcome outcome =
        nelder_mead(objective, x0, 0.6, options.max_iterations,
                    options.tolerance);
    best.iterations += outcome.iterations;
    if (outcome.f < best.rms_db) {
      best.rms_db = outcome.f;
      best.model = codec.decode(outcome.x);
      best.converged = outcome.converged;
    }
  }
  pl::validate(best.model);
  return best;
}

// Two-slope piecewise power law: scan the breakpoint over geometric
// midpoints of consecutive distinct distances and solve the inner linear
// least squares in (intercept, slopes) exactly.
FitResult fit_pl6(const std::vector<MeasurementDataset::Point>& points) {
  std::vector<double> distinct;
  for (const auto& point : points) {
    if (distinct.empty() || point.r_m != distinct.back()) {
      distinct.push_back(point.r_m);
    }
  }

  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::VectorXd log_term(n);
  Eigen::VectorXd gain(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    log_term[j] = -10.0 * std::log10(points[static_cast<std::size_t>(j)].r_m);
    gain[j] = points[static_cast<std::size_t>(j)].gain_db;
  }

  FitResult best;
  best.rms_db = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 2 < distinct.size(); ++i) {
    const double breakpoint = std::sqrt(distinct[i] * distinct[i + 1]);
    Eigen::MatrixXd design = Eigen::MatrixXd::Zero(n, 3);
    for (Eigen::Index j = 0; j < n; ++j) {
      const bool near = points[static_cast<std::size_t>(j)].r_m <= breakpoint;
      design(j, 0) = 1.0;
      design(j, near ? 1 : 2) = log_term[j];
    }
    Eigen::Vector3d solution =
        design.colPivHouseholderQr().solve(gain);
    double eta1 = std::max(0.0, solution[1]);
    double eta2 = std::max(eta1, solution[2]);
    double intercept = solution[0];
    if (eta1 != solution[1] || eta2 != solution[2]) {
      // Clamped slopes: re-center the intercept optimally for them.
      double sum = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        const bool near =
            points[static_cast<std::size_t>(j)].r_m <= breakpoint;
        sum += gain[j] - log_term[j] * (near ? eta1 : eta2);
      }
      intercept = sum / static_cast<double>(n);
    }
    const pl::PathLossModel model = pl::PL6{
        std::pow(10.0, intercept / 10.0), {eta1, eta2}, {0.0, breakpoint}};
    const double rms = rms_over(points, model);
    ++best.iterations;
    if (rms < best.rms_db) {
      best.rms_db = rms;
      best.model = model;
    }
  }
  if (!std::isfinite(best.rms_db)) {
    throw std::invalid_argument(
        "PL6 needs at least two distinct distances on each breakpoint side");
  }
  best.converged = true;
  pl::validate(best.model);
  return best;
}

}  // namespace

void MeasurementDataset::validate() const {
  if (points.empty()) {
    throw std::invalid_argument("dataset has no points");
  }
  for (const auto& point : points) {
    if (!(point.r_m > 0.0) || !std::isfinite(point.r_m)) {
      throw std::invalid_argument("distances must be positive and finite");
    }
    if (!std::isfinite(point.gain_db)) {
      throw std::invalid_argument("gains must be finite");
    }
  }
}

MeasurementDataset dataset_from_csv(std::istream& in, std::string source) {
  MeasurementDataset dataset;
  dataset.source = std::move(source);
  std::string line;
  bool header_seen = false;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string content = trimmed(line);
    if (content.empty() || content.front() == '#') {
      continue;
    }
    if (!header_seen) {
      std::string squashed;
      for (const char c : content) {
        if (c != ' ' && c != '\t') {
          squashed += c;
        }
      }
      if (squashed != "r_m,gain_db") {
        throw std::runtime_error(
            "expected dataset header 'r_m,gain_db', got: " + content);
      }
      header_seen = true;
      continue;
    }
    const auto comma = content.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("line " + std::to_string(line_number) +
                               ": expected 'r_m,gain_db' row");
    }
    try {
      MeasurementDataset::Point point;
      point.r_m = std::stod(content.substr(0, comma));
      point.gain_db = std::stod(content.substr(comma + 1));
      dataset.points.push_back(point);
    } catch (const std::exception&) {
      throw std::runtime_error("line " + std::to_string(line_number) +
                               ": malformed number in: " + content);
    }
  }
  if (!header_seen) {
    throw std::runtime_error("dataset is missing the 'r_m,gain_db' header");
  }
  dataset.validate();
  return dataset;
}

void dataset_to_csv(const MeasurementDataset& dataset, std::ostream& out) {
  if (!dataset.source.empty()) {
    out << "# source: " << dataset.source << "\n";
  }
  out << "r_m,gain_db\n";
  for (const auto& point : dataset.points) {
    out << format_g(point.r_m) << "," << format_g(point.gain_db) << "\n";
  }
}

MeasurementDataset synthesize_dataset(const pl::PathLossModel& model,
                                      const std::vector<double>& distances_m) {
  MeasurementDataset dataset;
  dataset.source = "synthetic " + pl::family_name(model);
  dataset.points.reserve(distances_m.size());
  for (const double r : distances_m) {
    dataset.points.push_back({r, pl::gain_db(model, r)});
  }
  dataset.validate();
  return dataset;
}

double rms_error(const MeasurementDataset& dataset,
                 const pl::PathLossModel& model) {
  dataset.validate();
  return rms_over(dataset.points, model);
}

FitResult fit(const MeasurementDataset& dataset, const std::string& family,
              const FitOptions& options) {
  dataset.validate();
  const int needed = parameter_count(family);
  const auto points = sorted_points(dataset);
  std::size_t distinct = 1;
  for (std::size_t i = 1; i < points.size(); ++i) {
    distinct += points[i].r_m != points[i - 1].r_m;
  }
  if (distinct < static_cast<std::size_t>(needed)) {
    throw std::invalid_argument(
        family + " needs at least " + std::to_string(needed) +
        " distinct distances; dataset has " + std::to_string(distinct));
  }

  if ((options.fixed_beta || options.beta_choices) &&
      !family_has_beta(family)) {
    throw std::invalid_argument(family + " has no beta parameter to constrain");
  }
  if (family == "PL6") {
    return fit_pl6(points);
  }
  if (options.beta_choices) {
    if (options.beta_choices->empty()) {
      throw std::invalid_argument("beta_choices must not be empty");
    }
    FitResult best;
    best.rms_db = std::numeric_limits<double>::infinity();
    for (const double beta : *options.beta_choices) {
      FitResult candidate = fit_with_simplex(family, points, options, beta);
      best.iterations += candidate.iterations;
      if (candidate.rms_db < best.rms_db) {
        candidate.iterations = best.iterations;
        best = std::move(candidate);
      }
    }
    return best;
  }
  return fit_with_simplex(family, points, options, options.fixed_beta);
}

std::vector<FitReportEntry> fit_report(const MeasurementDataset& dataset,
                                       const std::vector<std::string>& families,
                                       const FitOptions& options) {
  std::vector<FitReportEntry> report;
  report.reserve(families.size());
  for (const std::string& family : families) {
    FitReportEntry entry;
    entry.family = family;
    try {
      entry.result = fit(dataset, family, options);
    } catch (const std::exception& error) {
      entry.error = error.what();
    }
    report.push_back(std::move(entry));
  }
  std::stable_sort(report.begin(), report.end(),
                   [](const FitReportEntry& a, const FitReportEntry& b) {
                     const double ra = a.result
                                           ? a.result->rms_db
                                           : std::numeric_limits<double>::infinity();
                     const double rb = b.result
                                           ? b.result->rms_db
                                           : std::numeric_limits<double>::infinity();
                     return ra < rb;
                   });
  return report;
}

void report_to_csv(const std::vector<FitReportEntry>& report,
                   std::ostream& out) {
  out << "family,rms_db,iterations,converged,params,error\n";
  for (const auto& entry : report) {
    out << entry.family << ",";
    if (entry.result) {
      std::string params =
          pl::model_to_json(entry.result->model)["params"].dump();
      std::replace(params.begin(), params.end(), ',', ';');
      out << format_g(entry.result->rms_db) << ","
          << entry.result->iterations << ","
          << (entry.result->converged ? 1 : 0) << "," << params << ",";
    } else {
      std::string message = entry.error;
      std::replace(message.begin(), message.end(), ',', ';');
      out << ",,,," << message;
    }
    out << "\n";
  }
}

nlohmann::json report_to_json(const std::vector<FitReportEntry>& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& entry : report) {
    nlohmann::json row;
    row["family"] = entry.family;
    if (entry.result) {
      row["rms_db"] = entry.result->rms_db;
      row["iterations"] = entry.result->iterations;
      row["converged"] = entry.result->converged;
      row["model"] = pl::model_to_json(entry.result->model);
    } else {
      row["error"] = entry.error;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace stretchnet::fitting
