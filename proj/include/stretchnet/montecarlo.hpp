#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "stretchnet/analytic.hpp"
#include "stretchnet/pathloss.hpp"

namespace stretchnet::mc {

// System-level simulation protocol: base stations dropped in a square
// region, users evaluated in a centered window to avoid edge effects.
struct SimulationSpec {
  double outer_region_km = 20.0;  // side of the square deployment region
  double inner_region_km = 4.0;   // side of the centered evaluation window
  std::int64_t realizations = 10000;
  int users_per_realization = 20;
  std::uint64_t master_seed = 20260814;
  bool include_noise = false;
  double noise_power = 0.0;  // same linear unit as received power
  unsigned workers = 0;      // 0 = hardware concurrency

  void validate() const;  // throws std::invalid_argument on bad fields
};

// One batch of simulated users.  Values are linear SIR (or SINR when the
// spec includes noise); auxiliary per-sample and per-realization records
// support distributional checks.  Layout is slot-indexed
// (realization * users_per_realization + user), so content is independent
// of execution order.
struct SirSampleSet {
  std::vector<double> samples;             // linear SIR/SINR, all > 0, finite
  std::vector<double> serving_distance_m;  // nearest-BS distance per sample
  std::vector<std::int64_t> bs_counts;     // accepted BS count per realization
  std::int64_t redraws = 0;  // realizations re-drawn for lacking BSs
  SimulationSpec spec;       // snapshot of the generating configuration
  NetworkParams params;      // snapshot of the network parameters
};

// Draws `spec.realizations` independent networks: BS count Poisson with
// mean lambda * area, positions uniform, users uniform in the inner
// window, nearest-BS association, unit-mean exponential fading per
// user-BS link.  Interference sums every non-serving BS in the region.
// Realizations with no base station (or a single one when noise is
// excluded, which would make SIR infinite) are re-drawn and counted;
// throws when the re-draw rate exceeds 10%.  Output is identical for any
// worker count.
SirSampleSet simulate(const SimulationSpec& spec, const NetworkParams& params);

// Same protocol under an arbitrary path-loss model (association is still
// by nearest distance, which matches strongest-average-gain for the
// non-increasing families here).  The parameter snapshot in the result
// keeps only the density; alpha and beta stay zero.
SirSampleSet simulate(const SimulationSpec& spec, double lambda_per_m2,
                      const pathloss::PathLossModel& model);

struct EmpiricalEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

// Fraction of samples at or above the threshold, with binomial standard
// error sqrt(p(1-p)/N).
EmpiricalEstimate empirical_coverage(const SirSampleSet& set,
                                     const analytic::SirThreshold& theta);

// lambda * log2(1 + theta) * empirical coverage, in bps/Hz/m^2.
EmpiricalEstimate empirical_potential_throughput(
    const SirSampleSet& set, double lambda, const analytic::SirThreshold& theta);

// lambda * mean(log2(1 + sample)), in bps/Hz/m^2, with the standard error
// of the mean.
EmpiricalEstimate empirical_ase(const SirSampleSet& set, double lambda);

// One SIR value per line after comment lines snapshotting the spec and
// parameters, then a `sir` header.
void write_samples_csv(const SirSampleSet& set, std::ostream& out);

}  // namespace stretchnet::mc
