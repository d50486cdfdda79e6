#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stretchnet/pathloss.hpp"

namespace stretchnet::fitting {

// Distance/attenuation measurements: distances in meters, gains in dB.
struct MeasurementDataset {
  struct Point {
    double r_m = 0.0;
    double gain_db = 0.0;
  };
  std::vector<Point> points;
  std::string source;

  // All distances strictly positive, all values finite, at least one point.
  void validate() const;
};

// CSV exchange format: optional `#` comment lines, a `r_m,gain_db` header,
// then one point per line.
MeasurementDataset dataset_from_csv(std::istream& in,
                                    std::string source = "stream");
void dataset_to_csv(const MeasurementDataset& dataset, std::ostream& out);

// Noiseless samples of a model over the given distances, for round-trip
// and synthetic-benchmark use.
MeasurementDataset synthesize_dataset(const pathloss::PathLossModel& model,
                                      const std::vector<double>& distances_m);

// Root-mean-square of the dB residuals between the dataset and the model.
// Propagates std::domain_error when the model is singular at a distance.
double rms_error(const MeasurementDataset& dataset,
                 const pathloss::PathLossModel& model);

struct FitOptions {
  int starts = 16;            // deterministic multi-start count
  int max_iterations = 4000;  // per start
  double tolerance = 1e-12;   // objective spread stopping rule
  std::uint64_t seed = 1;     // jitters the non-primary starts
  // Pin beta to one value, or pick the best among several (only for
  // families with a beta parameter).
  std::optional<double> fixed_beta;
  std::optional<std::vector<double>> beta_choices;
};

struct FitResult {
  pathloss::PathLossModel model;
  double rms_db = 0.0;
  long iterations = 0;
  bool converged = false;
};

// Least-squares fit of one family ("PL1".."PL10") by multi-start simplex
// search over log-transformed parameters; PL6 uses a breakpoint scan with
// exact inner linear fits.  Accepts a local minimum; the reported rms_db
// always equals rms_error(dataset, model).  Throws std::invalid_argument
// when the dataset has fewer distinct distances than the family has
// parameters.
FitResult fit(const MeasurementDataset& dataset, const std::string& family,
              const FitOptions& options = {});

// One row per requested family, sorted ascending by rms_db; families whose
// fit failed carry the error message instead of aborting the report and
// sort last.
struct FitReportEntry {
  std::string family;
  std::optional<FitResult> result;
  std::string error;
};

std::vector<FitReportEntry> fit_report(const MeasurementDataset& dataset,
                                       const std::vector<std::string>& families,
                                       const FitOptions& options = {});

void report_to_csv(const std::vector<FitReportEntry>& report,
                   std::ostream& out);
nlohmann::json report_to_json(const std::vector<FitReportEntry>& report);

}  // namespace stretchnet::fitting
