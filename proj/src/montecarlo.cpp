#include "stretchnet/montecarlo.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "stretchnet/errors.hpp"
#include "stretchnet/parallel.hpp"
#include "stretchnet/rng.hpp"

namespace stretchnet::mc {

namespace {

// Stream tags: every random decision lives in its own counter stream keyed
// by (master_seed, realization, tag), so draws are independent of
// execution order and thread count.
constexpr std::uint32_t kKindCount = 0;
constexpr std::uint32_t kKindBsPositions = 1;
constexpr std::uint32_t kKindUserPositions = 2;
constexpr std::uint32_t kKindFading = 3;
constexpr int kMaxAttempts = 200;

std::uint32_t stream_tag(std::uint32_t attempt, std::uint32_t kind,
                         std::uint32_t user) {
  return (attempt << 24) | (kind << 16) | user;
}

// r^beta from the squared distance, avoiding std::pow on the hot paths.
Eigen::ArrayXd pow_beta_from_d2(const Eigen::ArrayXd& d2, double beta) {
  if (beta == 0.5) {
    return d2.sqrt().sqrt();
  }
  if (beta == 1.0) {
    return d2.sqrt();
  }
  if (beta == 2.0) {
    return d2;
  }
  return d2.pow(0.5 * beta);
}

std::string format_g(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

}  // namespace

void SimulationSpec::validate() const {
  if (!(outer_region_km > 0.0) || !std::isfinite(outer_region_km)) {
    throw std::invalid_argument("outer_region_km must be positive and finite");
  }
  if (!(inner_region_km > 0.0) || inner_region_km > outer_region_km) {
    throw std::invalid_argument(
        "inner_region_km must be in (0, outer_region_km]");
  }
  if (realizations < 1 ||
      realizations > static_cast<std::int64_t>(
                         std::numeric_limits<std::uint32_t>::max())) {
    throw std::invalid_argument("realizations must be in [1, 2^32 - 1]");
  }
  if (users_per_realization < 1 || users_per_realization > 0xFFFF) {
    throw std::invalid_argument("users_per_realization must be in [1, 65535]");
  }
  if (include_noise && (!(noise_power >= 0.0) || !std::isfinite(noise_power))) {
    throw std::invalid_argument("noise_power must be finite and >= 0");
  }
}

namespace {

// Shared realization protocol.  The gain functor maps squared distances to
// linear power gains, so the stretched-exponential fast path can skip the
// square root while arbitrary path-loss models take it once.
template <typename GainFn>
SirSampleSet simulate_impl(const SimulationSpec& spec,
                           const NetworkParams& snapshot, double lambda,
                           GainFn&& gain_from_d2) {
  spec.validate();

  const double outer_m = spec.outer_region_km * 1000.0;
  const double inner_m = spec.inner_region_km * 1000.0;
  const double area = outer_m * outer_m;
  const double mean_bs = lambda * area;
  if (mean_bs < 1.0) {
    throw std::invalid_argument(
        "expected base station count in the region is below 1; "
        "increase density or region size");
  }
  if (mean_bs < 10.0) {
    std::cerr << "stretchnet: warning: expected base station count "
              << mean_bs << " is below 10; estimates will be noisy\n";
  }

  // When noise is excluded, single-BS realizations have no interferer and
  // an infinite SIR, so they are re-drawn along with empty ones.
  const bool noise = spec.include_noise;
  const double n0 = noise ? spec.noise_power : 0.0;
  const std::int64_t min_bs = noise ? 1 : 2;

  const auto realizations = static_cast<std::size_t>(spec.realizations);
  const auto users = static_cast<std::size_t>(spec.users_per_realization);

  SirSampleSet set;
  set.spec = spec;
  set.params = snapshot;
  set.samples.resize(realizations * users);
  set.serving_distance_m.resize(realizations * users);
  set.bs_counts.resize(realizations);
  std::vector<std::int64_t> redraw_counts(realizations, 0);

  const std::uint64_t seed = spec.master_seed;
  const double tiny = std::numeric_limits<double>::min();

  auto run_one = [&](std::size_t index) {
    const auto realization = static_cast<std::uint32_t>(index);
    std::int64_t n = 0;
    std::uint32_t attempt = 0;
    for (;; ++attempt) {
      if (attempt > kMaxAttempts) {
        throw numerical_error(
            "persistent empty network realizations; density too low");
      }
      rng::CounterStream count_stream(
          seed, realization, stream_tag(attempt, kKindCount, 0));
      n = count_stream.poisson(mean_bs);
      if (n >= min_bs) {
        break;
      }
      ++redraw_counts[index];
    }

    rng::CounterStream bs_stream(seed, realization,
                                 stream_tag(attempt, kKindBsPositions, 0));
    Eigen::ArrayXd bs_x(n);
    Eigen::ArrayXd bs_y(n);
    bs_stream.fill_uniform01(bs_x.data(), static_cast<std::size_t>(n));
    bs_stream.fill_uniform01(bs_y.data(), static_cast<std::size_t>(n));
    bs_x = (bs_x - 0.5) * outer_m;
    bs_y = (bs_y - 0.5) * outer_m;

    rng::CounterStream user_stream(seed, realization,
                                   stream_tag(attempt, kKindUserPositions, 0));
    Eigen::ArrayXd user_x(static_cast<Eigen::Index>(users));
    Eigen::ArrayXd user_y(static_cast<Eigen::Index>(users));
    for (std::size_t u = 0; u < users; ++u) {
      user_x[static_cast<Eigen::Index>(u)] =
          user_stream.uniform(-0.5 * inner_m, 0.5 * inner_m);
      user_y[static_cast<Eigen::Index>(u)] =
          user_stream.uniform(-0.5 * inner_m, 0.5 * inner_m);
    }

    Eigen::ArrayXd uniforms(n);
    for (std::size_t u = 0; u < users; ++u) {
      rng::CounterStream fading_stream(
          seed, realization,
          stream_tag(attempt, kKindFading, static_cast<std::uint32_t>(u)));
      fading_stream.fill_uniform01(uniforms.data(),
                                   static_cast<std::size_t>(n));
      const Eigen::ArrayXd fading = -uniforms.log();

      const auto ui = static_cast<Eigen::Index>(u);
      const Eigen::ArrayXd d2 =
          (bs_x - user_x[ui]).square() + (bs_y - user_y[ui]).square();
      Eigen::Index serving = 0;
      d2.minCoeff(&serving);

      Eigen::ArrayXd received = gain_from_d2(d2) * fading;

      double desired = received[serving];
      received[serving] = 0.0;
      double interference = received.sum();
      // Guard against full underflow of astronomically weak links; the
      // sample-set invariant requires strictly positive, finite values.
      if (desired <= 0.0) {
        desired = tiny;
      }
      double denominator = interference + n0;
      if (denominator <= 0.0) {
        denominator = tiny;
      }

      const std::size_t slot = index * users + u;
      set.samples[slot] = desired / denominator;
      set.serving_distance_m[slot] = std::sqrt(d2[serving]);
    }
    set.bs_counts[index] = n;
  };

  const unsigned workers =
      spec.workers != 0
          ? spec.workers
          : std::max(1u, std::thread::hardware_concurrency());
  parallel_for(realizations, workers, run_one);

  for (const std::int64_t redrawn : redraw_counts) {
    set.redraws += redrawn;
  }
  if (static_cast<double>(set.redraws) >
      0.1 * static_cast<double>(spec.realizations)) {
    throw numerical_error(
        "more than 10% of realizations were re-drawn for lacking base "
        "stations; the configuration is too sparse to simulate faithfully");
  }
  for (const double sample : set.samples) {
    if (!(sample > 0.0) || !std::isfinite(sample)) {
      throw numerical_error("simulation produced a non-positive or "
                            "non-finite SIR sample");
    }
  }
  return set;
}

}  // namespace

SirSampleSet simulate(const SimulationSpec& spec, const NetworkParams& params) {
  params.validate();
  const double alpha = params.alpha;
  const double beta = params.beta;
  return simulate_impl(
      spec, params, params.lambda,
      [alpha, beta](const Eigen::ArrayXd& d2) -> Eigen::ArrayXd {
        return (-alpha * pow_beta_from_d2(d2, beta)).exp();
      });
}

SirSampleSet simulate(const SimulationSpec& spec, double lambda_per_m2,
                      const pathloss::PathLossModel& model) {
  if (!(lambda_per_m2 > 0.0) || !std::isfinite(lambda_per_m2)) {
    throw std::invalid_argument("lambda_per_m2 must be positive and finite");
  }
  pathloss::validate(model);
  // Only the density carries over to the parameter snapshot; alpha and
  // beta stay zero because no stretched exponential is in play.
  NetworkParams snapshot;
  snapshot.lambda = lambda_per_m2;
  const double tiny = std::numeric_limits<double>::min();
  const double huge = std::numeric_limits<double>::max();
  return simulate_impl(
      spec, snapshot, lambda_per_m2,
      [&model, tiny, huge](const Eigen::ArrayXd& d2) -> Eigen::ArrayXd {
        // Clamp away exact-zero distances (singular models) and infinite
        // gains so the sample-set invariant holds even in pathological
        // coincidences.
        const Eigen::ArrayXd r = d2.sqrt().max(tiny);
        return pathloss::evaluate_gain(model, r).min(huge);
      });
}

EmpiricalEstimate empirical_coverage(const SirSampleSet& set,
                                     const analytic::SirThreshold& theta) {
  theta.validate();
  if (set.samples.empty()) {
    throw std::invalid_argument("empirical_coverage: empty sample set");
  }
  const auto total = static_cast<double>(set.samples.size());
  double covered = 0.0;
  for (const double sample : set.samples) {
    if (sample >= theta.linear) {
      covered += 1.0;
    }
  }
  const double p = covered / total;
  return {p, std::sqrt(p * (1.0 - p) / total)};
}

EmpiricalEstimate empirical_potential_throughput(
    const SirSampleSet& set, double lambda,
    const analytic::SirThreshold& theta) {
  const EmpiricalEstimate coverage = empirical_coverage(set, theta);
  const double factor =
      lambda * std::numbers::log2e * std::log1p(theta.linear);
  return {factor * coverage.value, factor * coverage.standard_error};
}

EmpiricalEstimate empirical_ase(const SirSampleSet& set, double lambda) {
  if (set.samples.empty()) {
    throw std::invalid_argument("empirical_ase: empty sample set");
  }
  const auto total = static_cast<double>(set.samples.size());
  double mean = 0.0;
  for (const double sample : set.samples) {
    mean += std::numbers::log2e * std::log1p(sample);
  }
  mean /= total;
  double variance = 0.0;
  for (const double sample : set.samples) {
    const double dev = std::numbers::log2e * std::log1p(sample) - mean;
    variance += dev * dev;
  }
  variance = total > 1.0 ? variance / (total - 1.0) : 0.0;
  const double sem = std::sqrt(variance / total);
  return {lambda * mean, lambda * sem};
}

void write_samples_csv(const SirSampleSet& set, std::ostream& out) {
  out << "# stretchnet simulated SIR samples\n";
  out << "# lambda_per_m2=" << format_g(set.params.lambda)
      << " alpha=" << format_g(set.params.alpha)
      << " beta=" << format_g(set.params.beta)
      << " n0=" << format_g(set.params.n0) << "\n";
  out << "# outer_region_km=" << format_g(set.spec.outer_region_km)
      << " inner_region_km=" << format_g(set.spec.inner_region_km)
      << " realizations=" << set.spec.realizations
      << " users_per_realization=" << set.spec.users_per_realization << "\n";
  out << "# master_seed=" << set.spec.master_seed
      << " include_noise=" << (set.spec.include_noise ? 1 : 0)
      << " noise_power=" << format_g(set.spec.noise_power)
      << " redraws=" << set.redraws << "\n";
  out << "sir\n";
  for (const double sample : set.samples) {
    out << format_g(sample) << "\n";
  }
}

}  // namespace stretchnet::mc
