#include "ttalab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "ttalab/error.hpp"
#include "ttalab/gamma.hpp"
#include "ttalab/pruning.hpp"
#include "ttalab/risk.hpp"

namespace ttalab {
namespace {

// Stream tags keep the experiments' random numbers disjoint.
constexpr std::uint64_t kStreamRemoval = 1ULL << 32;
constexpr std::uint64_t kStreamUniformBound = 2ULL << 32;
constexpr std::uint64_t kStreamIndependent = 3ULL << 32;
constexpr std::uint64_t kStreamConsistency = 4ULL << 32;

constexpr double kUniformBoundSlack = 1e-12;

// Runs body(i) for i in [0, n). Each index writes only its own output slot,
// so the result is independent of the thread count.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  }
}

SimulationConfig with_samples(SimulationConfig config, std::size_t n) {
  config.n_samples = n;
  return config;
}

}  // namespace

void SimulationConfig::validate() const {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("SimulationConfig: rho must lie in [0, 1]");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("SimulationConfig: sigma must be a finite value >= 0");
  }
  if (m < 1) throw InvalidArgument("SimulationConfig: m must be >= 1");
  if (n_samples < 2) throw InvalidArgument("SimulationConfig: n_samples must be >= 2");
  if (n_trials < 1) throw InvalidArgument("SimulationConfig: n_trials must be >= 1");
  for (const double r : rho_grid) {
    if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("SimulationConfig: rho_grid entries must lie in [0, 1]");
  }
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

PredictionSet generate_correlated_errors(const SimulationConfig& config, std::mt19937_64& rng) {
  config.validate();
  const auto n = static_cast<Eigen::Index>(config.n_samples);
  const auto m = static_cast<Eigen::Index>(config.m);
  const double shared = config.sigma * std::sqrt(config.rho);
  const double own = config.sigma * std::sqrt(1.0 - config.rho);

  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd predictions(n, m);
  for (Eigen::Index s = 0; s < n; ++s) {
    const double z = normal(rng);
    for (Eigen::Index i = 0; i < m; ++i) {
      predictions(s, i) = -(shared * z + own * normal(rng));
    }
  }
  return PredictionSet(Eigen::VectorXd::Zero(n), std::move(predictions));
}

PredictionSet generate_correlated_errors(const SimulationConfig& config) {
  auto rng = substream(config.seed, 0, 0);
  return generate_correlated_errors(config, rng);
}

std::vector<TrialOutcome> removal_probability_sweep(const SimulationConfig& config, std::size_t prune_index) {
  config.validate();
  if (config.rho_grid.empty()) throw InvalidArgument("removal_probability_sweep: rho_grid is empty");
  if (config.m < 2) throw InvalidArgument("removal_probability_sweep: m must be >= 2");
  if (prune_index >= config.m) throw InvalidArgument("removal_probability_sweep: prune index out of range");

  std::vector<TrialOutcome> outcomes;
  outcomes.reserve(config.rho_grid.size());
  for (std::size_t r = 0; r < config.rho_grid.size(); ++r) {
    SimulationConfig point = config;
    point.rho = config.rho_grid[r];

    std::vector<char> holds(config.n_trials, 0);
    parallel_for(config.n_trials, config.threads, [&](std::size_t t) {
      auto rng = substream(config.seed, kStreamRemoval | r, t);
      const GammaMatrix gamma = estimate_gamma(generate_correlated_errors(point, rng));
      holds[t] = prune_check(gamma, prune_index).removable ? 1 : 0;
    });

    TrialOutcome out{point.rho, 0.0, config.n_trials, {}};
    out.per_trial_flags.assign(holds.begin(), holds.end());
    const auto count = std::count(holds.begin(), holds.end(), 1);
    out.probability_holds = static_cast<double>(count) / static_cast<double>(config.n_trials);
    outcomes.push_back(std::move(out));
  }
  return outcomes;
}

std::vector<double> isotonic_fit(const std::vector<double>& values) {
  // Blocks of (mean, size); merge backwards while order is violated.
  std::vector<std::pair<double, std::size_t>> blocks;
  for (const double v : values) {
    blocks.emplace_back(v, 1);
    while (blocks.size() > 1 && blocks[blocks.size() - 2].first > blocks.back().first) {
      const auto [mean_b, size_b] = blocks.back();
      blocks.pop_back();
      auto& [mean_a, size_a] = blocks.back();
      mean_a = (mean_a * static_cast<double>(size_a) + mean_b * static_cast<double>(size_b)) /
               static_cast<double>(size_a + size_b);
      size_a += size_b;
    }
  }
  std::vector<double> fit;
  fit.reserve(values.size());
  for (const auto& [mean, size] : blocks) fit.insert(fit.end(), size, mean);
  return fit;
}

double isotonic_residual(const std::vector<double>& values) {
  const std::vector<double> fit = isotonic_fit(values);
  double worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) worst = std::max(worst, std::abs(values[i] - fit[i]));
  return worst;
}

UniformBoundReport verify_uniform_bound(const SimulationConfig& config) {
  config.validate();
  std::vector<double> tta(config.n_trials);
  std::vector<double> avg(config.n_trials);
  parallel_for(config.n_trials, config.threads, [&](std::size_t t) {
    auto rng = substream(config.seed, kStreamUniformBound, t);
    const PredictionSet data = generate_correlated_errors(config, rng);
    tta[t] = direct_risk(data, WeightVector::uniform(config.m));
    avg[t] = per_augmentation_error(data).mean();
  });

  UniformBoundReport report;
  report.trials = config.n_trials;
  report.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < config.n_trials; ++t) {
    const double excess = tta[t] - avg[t];
    report.max_excess = std::max(report.max_excess, excess);
    if (excess > kUniformBoundSlack) ++report.violations;
    report.mean_tta_risk += tta[t];
    report.mean_average_risk += avg[t];
  }
  report.mean_tta_risk /= static_cast<double>(config.n_trials);
  report.mean_average_risk /= static_cast<double>(config.n_trials);
  report.ratio = report.mean_average_risk > 0.0 ? report.mean_tta_risk / report.mean_average_risk : 1.0;
  report.passed = report.violations == 0;
  return report;
}

IndependentRatioReport verify_independent_ratio(const SimulationConfig& config) {
  config.validate();
  if (config.rho != 0.0) {
    throw InvalidArgument("verify_independent_ratio: requires uncorrelated errors (rho = 0), got rho = " +
                          std::to_string(config.rho));
  }
  if (!(config.sigma > 0.0)) throw InvalidArgument("verify_independent_ratio: sigma must be positive");

  auto rng = substream(config.seed, kStreamIndependent, 0);
  const Eigen::MatrixXd e = generate_correlated_errors(config, rng).residuals();
  const auto n = static_cast<double>(e.rows());
  const auto m = static_cast<double>(e.cols());

  // Per-sample squared error of the uniform combination and mean squared
  // error of the individual columns.
  const Eigen::ArrayXd combined = (e.rowwise().sum() / m).array().square();
  const Eigen::ArrayXd single = e.array().square().rowwise().sum() / m;

  IndependentRatioReport report;
  report.m = config.m;
  report.n_samples = config.n_samples;
  report.tta_risk = combined.mean();
  report.average_risk = single.mean();
  report.ratio = report.tta_risk / report.average_risk;
  report.expected_ratio = 1.0 / m;

  const Eigen::ArrayXd influence = combined - report.ratio * single;
  const double var = (influence - influence.mean()).square().sum() / (n - 1.0);
  report.standard_error = std::sqrt(var / n) / report.average_risk;
  report.passed = std::abs(report.ratio - report.expected_ratio) <= 3.0 * report.standard_error;
  return report;
}

ConsistencyReport verify_consistency(const SimulationConfig& config,
                                     const std::vector<std::size_t>& n_grid) {
  config.validate();
  if (n_grid.size() < 2) throw InvalidArgument("verify_consistency: n_grid needs at least two sizes");
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    if (n_grid[g] < 2 || (g > 0 && n_grid[g] <= n_grid[g - 1])) {
      throw InvalidArgument("verify_consistency: n_grid must be strictly increasing sizes >= 2");
    }
  }

  const std::size_t reps = config.n_trials;
  const std::size_t points = n_grid.size();
  ConsistencyReport report;
  report.n_grid = n_grid;
  report.expected_risk = config.sigma * config.sigma;
  report.deviations.assign(reps, std::vector<double>(points, 0.0));

  parallel_for(reps * points, config.threads, [&](std::size_t job) {
    const std::size_t r = job / points;
    const std::size_t g = job % points;
    auto rng = substream(config.seed, kStreamConsistency | g, r);
    const Eigen::MatrixXd e =
        generate_correlated_errors(with_samples(config, n_grid[g]), rng).residuals();
    const double risk = e.squaredNorm() / static_cast<double>(e.size());
    report.deviations[r][g] = std::abs(risk - report.expected_risk);
  });

  // A step counts as shrinking when the deviation drops, or when it is
  // already exactly zero on both sides.
  const auto shrinks = [](double before, double after) {
    return after < before || (after == 0.0 && before == 0.0);
  };
  const std::size_t steps = points - 1;

  report.mean_abs_deviation.assign(points, 0.0);
  for (std::size_t r = 0; r < reps; ++r) {
    std::size_t down = 0;
    for (std::size_t g = 0; g < points; ++g) {
      report.mean_abs_deviation[g] += report.deviations[r][g] / static_cast<double>(reps);
      if (g > 0 && shrinks(report.deviations[r][g - 1], report.deviations[r][g])) ++down;
    }
    if (2 * down > steps) ++report.repetitions_passing;
  }
  for (std::size_t g = 1; g < points; ++g) {
    if (shrinks(report.mean_abs_deviation[g - 1], report.mean_abs_deviation[g])) ++report.steps_decreasing;
  }
  report.passed = 2 * report.steps_decreasing > steps;
  return report;
}

}  // namespace ttalab
