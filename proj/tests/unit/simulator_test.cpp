#include <cmath>

#include <gtest/gtest.h>

#include "ttalab/error.hpp"
#include "ttalab/gamma.hpp"
#include "ttalab/simulator.hpp"

namespace ttalab {
namespace {

SimulationConfig small(std::size_t m, double rho, std::size_t n = 100) {
  SimulationConfig c;
  c.m = m;
  c.rho = rho;
  c.n_samples = n;
  c.n_trials = 50;
  c.seed = 424242;
  return c;
}

TEST(SimulationConfig, Validation) {
  SimulationConfig c;
  EXPECT_NO_THROW(c.validate());
  using Mutation = void (*)(SimulationConfig&);
  const std::initializer_list<Mutation> mutations{
      [](SimulationConfig& x) { x.rho = -0.1; },      [](SimulationConfig& x) { x.rho = 1.5; },
      [](SimulationConfig& x) { x.sigma = -1; },      [](SimulationConfig& x) { x.m = 0; },
      [](SimulationConfig& x) { x.n_samples = 1; },   [](SimulationConfig& x) { x.n_trials = 0; },
      [](SimulationConfig& x) { x.rho_grid = {0.2, 1.2}; }};
  for (const Mutation bad : mutations) {
    SimulationConfig x;
    bad(x);
    EXPECT_THROW(x.validate(), InvalidArgument);
  }
}

TEST(Generator, ShapeLabelsAndReproducibility) {
  const SimulationConfig c = small(4, 0.3, 17);
  const PredictionSet a = generate_correlated_errors(c);
  EXPECT_EQ(a.sample_count(), 17u);
  EXPECT_EQ(a.augmentation_count(), 4u);
  EXPECT_TRUE(a.labels().isZero(0.0));
  EXPECT_TRUE(a == generate_correlated_errors(c));
  SimulationConfig other = c;
  other.seed += 1;
  EXPECT_FALSE(a == generate_correlated_errors(other));
}

TEST(Generator, IndependentColumnsAreUncorrelated) {
  const std::size_t n = 20000;
  const Eigen::MatrixXd e = generate_correlated_errors(small(4, 0.0, n)).residuals();
  const Eigen::MatrixXd centered = e.rowwise() - e.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
  const double bound = 4.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = i + 1; j < 4; ++j) {
      EXPECT_LT(std::abs(cov(i, j) / std::sqrt(cov(i, i) * cov(j, j))), bound);
    }
  }
}

TEST(Generator, FullCorrelationGivesIdenticalColumns) {
  const PredictionSet d = generate_correlated_errors(small(5, 1.0));
  for (Eigen::Index i = 1; i < 5; ++i) EXPECT_EQ(d.predictions().col(i), d.predictions().col(0));
}

TEST(Generator, ZeroSigmaGivesZeroGamma) {
  SimulationConfig c = small(3, 0.5);
  c.sigma = 0.0;
  EXPECT_TRUE(estimate_gamma(generate_correlated_errors(c)).entries().isZero(0.0));
}

TEST(Generator, GammaConvergesToEquicorrelatedMoments) {
  const std::size_t n = 40000;
  for (const double rho : {0.0, 0.33, 0.8}) {
    SimulationConfig c = small(4, rho, n);
    c.sigma = 1.5;
    const Eigen::MatrixXd g = estimate_gamma(generate_correlated_errors(c)).entries();
    const double s2 = c.sigma * c.sigma;
    const Eigen::MatrixXd expected =
        s2 * ((1.0 - rho) * Eigen::MatrixXd::Identity(4, 4) + rho * Eigen::MatrixXd::Ones(4, 4));
    // Each entry is a mean of products with variance <= 2 sigma^4.
    const double bound = 6.0 * std::sqrt(2.0) * s2 / std::sqrt(static_cast<double>(n));
    EXPECT_LT((g - expected).cwiseAbs().maxCoeff(), bound) << "rho=" << rho;
  }
}

TEST(Isotonic, PoolAdjacentViolators) {
  const auto fit = isotonic_fit({1, 3, 2, 4});
  EXPECT_EQ(fit, (std::vector<double>{1, 2.5, 2.5, 4}));
  EXPECT_DOUBLE_EQ(isotonic_residual({1, 3, 2, 4}), 0.5);
  EXPECT_EQ(isotonic_residual({0.1, 0.2, 0.2, 0.9}), 0.0);
  EXPECT_EQ(isotonic_fit({3, 2, 1}), (std::vector<double>{2, 2, 2}));
  EXPECT_TRUE(isotonic_fit({}).empty());
}

TEST(RemovalSweep, ProbabilityIsFlagFrequencyAndDeterministic) {
  SimulationConfig c = small(6, 0.5);
  c.rho_grid = {0.1, 0.5, 0.9};
  const auto a = removal_probability_sweep(c);
  ASSERT_EQ(a.size(), 3u);
  for (const auto& o : a) {
    std::size_t count = 0;
    for (const bool f : o.per_trial_flags) count += f;
    EXPECT_EQ(o.trials, c.n_trials);
    EXPECT_EQ(o.probability_holds, static_cast<double>(count) / static_cast<double>(o.trials));
  }
  const auto b = removal_probability_sweep(c);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].per_trial_flags, b[i].per_trial_flags);
}

TEST(RemovalSweep, ThreadCountDoesNotChangeResults) {
  SimulationConfig c = small(5, 0.0);
  c.rho_grid = {0.2, 0.7};
  c.threads = 1;
  const auto serial = removal_probability_sweep(c);
  c.threads = 4;
  const auto parallel = removal_probability_sweep(c);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].per_trial_flags, parallel[i].per_trial_flags);
  }
}

TEST(RemovalSweep, PerfectCorrelationAlwaysHolds) {
  SimulationConfig c = small(10, 0.0, 5000);
  c.rho_grid = {1.0};
  c.n_trials = 20;
  EXPECT_EQ(removal_probability_sweep(c).front().probability_holds, 1.0);
}

TEST(RemovalSweep, Errors) {
  SimulationConfig c = small(4, 0.0);
  EXPECT_THROW(removal_probability_sweep(c), InvalidArgument);
  c.rho_grid = {0.5};
  c.m = 1;
  EXPECT_THROW(removal_probability_sweep(c), InvalidArgument);
  c.m = 3;
  EXPECT_THROW(removal_probability_sweep(c, 3), InvalidArgument);
}

TEST(UniformBound, HoldsInEveryTrial) {
  for (const double rho : {0.0, 0.5, 0.95}) {
    const UniformBoundReport r = verify_uniform_bound(small(6, rho));
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.violations, 0u);
    EXPECT_LE(r.max_excess, 1e-12);
  }
}

TEST(UniformBound, PerfectCorrelationGivesEqualRisks) {
  const UniformBoundReport r = verify_uniform_bound(small(4, 1.0));
  EXPECT_NEAR(r.mean_tta_risk, r.mean_average_risk, 1e-12);
  EXPECT_TRUE(r.passed);
}

TEST(UniformBound, IndependentErrorsQuarterTheRiskForFourStrategies) {
  SimulationConfig c = small(4, 0.0, 1000);
  c.n_trials = 200;
  EXPECT_NEAR(verify_uniform_bound(c).ratio, 0.25, 0.01);
}

TEST(UniformBound, SingleStrategyIsTight) {
  const UniformBoundReport r = verify_uniform_bound(small(1, 0.0));
  EXPECT_EQ(r.max_excess, 0.0);
  EXPECT_EQ(r.ratio, 1.0);
}

TEST(IndependentRatio, RatioNearOneOverM) {
  for (const std::size_t m : {2u, 5u}) {
    const IndependentRatioReport r = verify_independent_ratio(small(m, 0.0, 100000));
    EXPECT_TRUE(r.passed) << "m=" << m << " ratio=" << r.ratio << " se=" << r.standard_error;
    EXPECT_DOUBLE_EQ(r.expected_ratio, 1.0 / static_cast<double>(m));
    EXPECT_GT(r.standard_error, 0.0);
    EXPECT_LT(r.standard_error, 0.01);
  }
}

TEST(IndependentRatio, SingleStrategyRatioIsExactlyOne) {
  const IndependentRatioReport r = verify_independent_ratio(small(1, 0.0));
  EXPECT_EQ(r.ratio, 1.0);
  EXPECT_TRUE(r.passed);
}

TEST(IndependentRatio, RejectsCorrelatedErrors) {
  EXPECT_THROW(verify_independent_ratio(small(3, 0.2)), InvalidArgument);
}

TEST(Consistency, DeviationShrinksWithSampleSize) {
  SimulationConfig c = small(3, 0.3);
  const ConsistencyReport r = verify_consistency(c, {100, 400, 1600, 6400});
  EXPECT_DOUBLE_EQ(r.expected_risk, 1.0);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.steps_decreasing, 3u);
  EXPECT_GT(r.repetitions_passing, c.n_trials / 2);
  EXPECT_LT(r.mean_abs_deviation.back(), r.mean_abs_deviation.front());
}

TEST(Consistency, ZeroSigmaHasZeroDeviation) {
  SimulationConfig c = small(3, 0.3);
  c.sigma = 0.0;
  const ConsistencyReport r = verify_consistency(c, {100, 400});
  for (const auto& row : r.deviations) {
    for (const double d : row) EXPECT_EQ(d, 0.0);
  }
  EXPECT_TRUE(r.passed);
}

TEST(Consistency, SingleColumnIsOrdinaryLawOfLargeNumbers) {
  const ConsistencyReport r = verify_consistency(small(1, 0.0), {100, 400, 1600, 6400});
  EXPECT_TRUE(r.passed);
}

TEST(Consistency, RejectsBadGrid) {
  EXPECT_THROW(verify_consistency(small(2, 0.0), {100}), InvalidArgument);
  EXPECT_THROW(verify_consistency(small(2, 0.0), {400, 100}), InvalidArgument);
}

}  // namespace
}  // namespace ttalab
