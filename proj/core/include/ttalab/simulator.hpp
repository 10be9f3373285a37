#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "ttalab/prediction_set.hpp"

namespace ttalab {

/// Parameters of a Monte Carlo run over equicorrelated Gaussian residuals.
struct SimulationConfig {
  std::size_t m = 10;
  double rho = 0.0;
  double sigma = 1.0;
  std::size_t n_samples = 100;
  std::size_t n_trials = 100;
  std::uint64_t seed = 20211;
  std::vector<double> rho_grid;
  /// Worker threads for trial loops; 0 picks hardware_concurrency. Results
  /// do not depend on this value.
  unsigned threads = 0;

  /// Throws InvalidArgument unless 0 <= rho <= 1, sigma >= 0, m >= 1,
  /// n_samples >= 2 and n_trials >= 1.
  void validate() const;
};

/// Engine for one independent substream. The same (seed, stream, index)
/// always yields the same sequence, which is what makes parallel and serial
/// trial loops agree.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Residuals eps_i = sigma (sqrt(rho) z + sqrt(1 - rho) u_i) per sample with
/// z, u_i iid N(0, 1). Labels are zero and column i holds -eps_i, so the
/// residual of column i is exactly eps_i.
PredictionSet generate_correlated_errors(const SimulationConfig& config, std::mt19937_64& rng);

/// Convenience overload drawing from substream(seed, 0, 0).
PredictionSet generate_correlated_errors(const SimulationConfig& config);

struct TrialOutcome {
  double rho;
  double probability_holds;
  std::size_t trials;
  std::vector<bool> per_trial_flags;
};

/// For every rho in config.rho_grid: n_trials draws, each estimating Gamma
/// and recording whether dropping `prune_index` does not increase the
/// uniform risk. Requires m >= 2.
std::vector<TrialOutcome> removal_probability_sweep(const SimulationConfig& config,
                                          std::size_t prune_index = 0);

/// Pool-adjacent-violators fit of a nondecreasing sequence (unit weights).
std::vector<double> isotonic_fit(const std::vector<double>& values);

/// max_i |values_i - isotonic_fit(values)_i|.
double isotonic_residual(const std::vector<double>& values);

struct UniformBoundReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  /// max over trials of (tta_risk - average_risk); <= 0 up to rounding.
  double max_excess = 0.0;
  double mean_tta_risk = 0.0;
  double mean_average_risk = 0.0;
  /// mean_tta_risk / mean_average_risk (1 when both are zero).
  double ratio = 0.0;
  bool passed = false;
};

/// Uniform-TTA empirical risk against the average single-column risk in each
/// trial; passes only with zero violations beyond 1e-12.
UniformBoundReport verify_uniform_bound(const SimulationConfig& config);

struct IndependentRatioReport {
  std::size_t m = 0;
  std::size_t n_samples = 0;
  double tta_risk = 0.0;
  double average_risk = 0.0;
  double ratio = 0.0;
  double expected_ratio = 0.0;
  /// Delta-method standard error of the ratio of means.
  double standard_error = 0.0;
  bool passed = false;
};

/// One large draw with rho = 0. Passes when |ratio - 1/m| <= 3 standard
/// errors. Throws InvalidArgument when rho != 0.
IndependentRatioReport verify_independent_ratio(const SimulationConfig& config);

struct ConsistencyReport {
  std::vector<std::size_t> n_grid;
  double expected_risk = 0.0;
  /// Mean over repetitions of |augmented empirical risk - sigma^2| per N.
  std::vector<double> mean_abs_deviation;
  /// deviations[r][g]: repetition r at grid point g.
  std::vector<std::vector<double>> deviations;
  /// Repetitions whose deviation shrank on a majority of grid steps.
  std::size_t repetitions_passing = 0;
  std::size_t steps_decreasing = 0;
  bool passed = false;
};

/// n_trials repetitions; every (repetition, N) draw is an independent
/// substream. Passes when the mean absolute deviation decreases on a strict
/// majority of consecutive grid steps.
ConsistencyReport verify_consistency(const SimulationConfig& config,
                                     const std::vector<std::size_t>& n_grid);

}  // namespace ttalab
