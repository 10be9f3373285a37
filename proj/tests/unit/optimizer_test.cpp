#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "support/literals.hpp"
#include "support/oracles.hpp"
#include "ttalab/error.hpp"
#include "ttalab/optimizer.hpp"
#include "ttalab/risk.hpp"

namespace ttalab {
namespace {

using testing::mat;
using testing::random_psd;
using testing::simplex_grid_min;
using testing::vec;

SolverOptions exact() {
  SolverOptions o;
  o.ridge_lambda = 0.0;
  return o;
}

TEST(SolverOptions, Validation) {
  SolverOptions o;
  o.ridge_lambda = -1.0;
  EXPECT_THROW(o.validate(), InvalidArgument);
  o.ridge_lambda = 0.0;
  o.conditioning_threshold = 1.0;
  EXPECT_THROW(o.validate(), InvalidArgument);
}

TEST(ClosedForm, IdentityGivesUniform) {
  for (Eigen::Index m = 1; m <= 6; ++m) {
    const SolverReport r = solve_closed_form(GammaMatrix(Eigen::MatrixXd::Identity(m, m)));
    for (Eigen::Index i = 0; i < m; ++i) EXPECT_NEAR(r.weights.values()(i), 1.0 / m, 1e-15);
    EXPECT_EQ(r.weights.provenance(), WeightProvenance::closed_form_raw);
    EXPECT_EQ(r.iterations, 0);
  }
}

TEST(ClosedForm, ExchangeableTwoByTwoGivesHalves) {
  for (const double rho : {-0.9, -0.3, 0.0, 0.5, 0.99}) {
    const SolverReport r = solve_closed_form(GammaMatrix(mat({{1, rho}, {rho, 1}})));
    EXPECT_NEAR(r.weights[0], 0.5, 1e-12) << rho;
    EXPECT_NEAR(r.weights[1], 0.5, 1e-12) << rho;
  }
}

TEST(ClosedForm, DiagonalOneFourMatchesGridSearch) {
  const Eigen::MatrixXd g = mat({{1, 0}, {0, 4}});
  const auto grid = simplex_grid_min(g, 1e-4);
  EXPECT_NEAR(grid.weights[0], 0.8, 1e-3);
  EXPECT_NEAR(grid.weights[1], 0.2, 1e-3);

  const SolverReport r = solve_closed_form(GammaMatrix(g), exact());
  EXPECT_NEAR(r.weights[0], 0.8, 1e-12);
  EXPECT_NEAR(r.weights[1], 0.2, 1e-12);
  EXPECT_NEAR(r.achieved_risk, 0.8, 1e-12);  // 0.64 + 4 * 0.04
  EXPECT_NEAR(r.lagrange_lambda, 0.8, 1e-12);
}

TEST(ClosedForm, NegativeWeightsAreFlaggedNotClipped) {
  const SolverReport r = solve_closed_form(GammaMatrix(mat({{1, 2}, {2, 5}})), exact());
  EXPECT_NEAR(r.weights[0], 1.5, 1e-12);
  EXPECT_NEAR(r.weights[1], -0.5, 1e-12);
  EXPECT_TRUE(r.weights.negative_weights_present());
}

TEST(ClosedForm, SingularWithoutRidgeThrows) {
  EXPECT_THROW(solve_closed_form(GammaMatrix(mat({{1, 1}, {1, 1}})), exact()), SingularGamma);
  EXPECT_THROW(solve_closed_form(GammaMatrix(Eigen::MatrixXd::Zero(3, 3)), exact()), SingularGamma);
}

TEST(ClosedForm, RidgeRescuesSingularGamma) {
  // The default ridge leaves a condition number near 2e8, so only ~8 digits survive.
  const SolverReport r = solve_closed_form(GammaMatrix(mat({{1, 1}, {1, 1}})));
  EXPECT_NEAR(r.weights[0], 0.5, 1e-9);
  const SolverReport zero = solve_closed_form(GammaMatrix(Eigen::MatrixXd::Zero(3, 3)));
  EXPECT_NEAR(zero.weights[2], 1.0 / 3.0, 1e-12);
}

TEST(ClosedForm, KktStationarityOnRegularizedGamma) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const GammaMatrix g(random_psd(rng, 2 + t % 7));
    SolverOptions o;
    o.ridge_lambda = 1e-6;
    const SolverReport r = solve_closed_form(g, o);
    const Eigen::VectorXd grad = regularized(g, o.ridge_lambda) * r.weights.values();
    const double scale = std::max(1.0, std::abs(r.lagrange_lambda));
    EXPECT_LT((grad.array() - r.lagrange_lambda).abs().maxCoeff(), 1e-8 * scale);
    EXPECT_NEAR(r.weights.values().sum(), 1.0, 1e-12);
  }
}

TEST(ClosedForm, ScaleInvariant) {
  // Rounding c * Gamma perturbs entries by an ulp, which moves the weights by
  // about cond * eps; keep to matrices where that stays below the tolerance.
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int t = 0; checked < 100; ++t) {
    const Eigen::MatrixXd g = random_psd(rng, 2 + t % 5);
    if (condition_diagnostics(GammaMatrix(g)) > 1e6) continue;
    ++checked;
    const SolverReport a = solve_closed_form(GammaMatrix(g));
    for (const double c : {1e-6, 3.0, 1e5}) {
      const SolverReport b = solve_closed_form(GammaMatrix(c * g));
      EXPECT_LT((a.weights.values() - b.weights.values()).cwiseAbs().maxCoeff(), 1e-9)
          << "c=" << c;
    }
  }
}

TEST(Projected, NoOpWhenClosedFormIsFeasible) {
  for (const Eigen::MatrixXd& g : {mat({{1, 0}, {0, 4}}), mat({{2, 0.3, 0.1}, {0.3, 1, 0.2}, {0.1, 0.2, 3}})}) {
    const SolverReport raw = solve_closed_form(GammaMatrix(g));
    const SolverReport proj = solve_projected(GammaMatrix(g));
    ASSERT_FALSE(raw.weights.negative_weights_present());
    EXPECT_EQ(raw.weights.values(), proj.weights.values());
    EXPECT_EQ(proj.weights.provenance(), WeightProvenance::closed_form_projected);
    EXPECT_EQ(proj.iterations, 0);
  }
}

TEST(Projected, NearlyCollinearPairMatchesGrid) {
  const Eigen::MatrixXd g = mat({{1, 0.99}, {0.99, 1.0001}});
  const auto grid = simplex_grid_min(g, 1e-4);
  const SolverReport r = solve_projected(GammaMatrix(g));
  EXPECT_NEAR(r.weights[0], grid.weights[0], 1e-3);
  // Closed form by hand: row sums of the inverse are proportional to (0.0101, 0.01).
  EXPECT_NEAR(r.weights[0], 0.0101 / 0.0201, 1e-5);
  EXPECT_NEAR(r.weights[0], solve_closed_form(GammaMatrix(g)).weights[0], 1e-15);
}

TEST(Projected, NegativeClosedFormMovesToVertex) {
  const Eigen::MatrixXd g = mat({{1, 2}, {2, 5}});
  const SolverReport r = solve_projected(GammaMatrix(g));
  EXPECT_EQ(r.weights[0], 1.0);
  EXPECT_EQ(r.weights[1], 0.0);
  EXPECT_EQ(r.iterations, 1);
  const auto grid = simplex_grid_min(g, 1e-4);
  EXPECT_EQ(grid.weights[0], 1.0);
}

TEST(Projected, ReadmitsCoordinatesWithNegativeMultiplier) {
  // Dropping the most negative coordinate first lands on a non-optimal face
  // here; the active-set polish must recover the grid optimum.
  std::mt19937_64 rng(99);
  int polished = 0;
  for (int t = 0; t < 400 && polished < 5; ++t) {
    const Eigen::MatrixXd g = random_psd(rng, 4);
    const SolverReport r = solve_projected(GammaMatrix(g));
    if (r.iterations <= 1) continue;
    const auto grid = simplex_grid_min(g, 1e-2);
    EXPECT_LE(weighted_risk(GammaMatrix(g), r.weights), grid.risk + 1e-6);
    ++polished;
  }
}

TEST(Projected, NeverWorseThanUniformAndGridOptimal) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 60; ++t) {
    const Eigen::Index m = 2 + t % 3;  // m <= 4 keeps the 1e-3 lattice cheap here
    const Eigen::MatrixXd g = random_psd(rng, m);
    const GammaMatrix gamma(g);
    const SolverReport r = solve_projected(gamma);
    const double risk = weighted_risk(gamma, r.weights);
    EXPECT_LE(r.achieved_risk,
              weighted_risk(GammaMatrix(regularized(gamma, 1e-8)), WeightVector::uniform(m)) + 1e-12);
    EXPECT_LE(risk, weighted_risk(gamma, WeightVector::uniform(m)) + 1e-12);
    EXPECT_LE(risk, simplex_grid_min(g, 1e-3).risk + 1e-6);
    EXPECT_GE(r.weights.values().minCoeff(), 0.0);
  }
}

TEST(Projected, PermutationEquivariant) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index m = 2 + t % 6;
    const Eigen::MatrixXd g = random_psd(rng, m);
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::PermutationMatrix<Eigen::Dynamic> p(m);
    for (Eigen::Index i = 0; i < m; ++i) p.indices()(i) = perm[static_cast<std::size_t>(i)];
    const Eigen::MatrixXd gp = p * g * p.transpose();

    const Eigen::VectorXd w = solve_projected(GammaMatrix(g)).weights.values();
    const Eigen::VectorXd wp = solve_projected(GammaMatrix(gp)).weights.values();
    EXPECT_LT((p * w - wp).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Solve, DispatchesOnProjectionFlag) {
  const GammaMatrix g(mat({{1, 2}, {2, 5}}));
  SolverOptions o;
  EXPECT_EQ(solve(g, o).weights.provenance(), WeightProvenance::closed_form_projected);
  o.projection = false;
  EXPECT_EQ(solve(g, o).weights.provenance(), WeightProvenance::closed_form_raw);
}

TEST(ConditionDiagnostics, Examples) {
  EXPECT_DOUBLE_EQ(condition_diagnostics(GammaMatrix(Eigen::MatrixXd::Identity(4, 4))), 1.0);
  EXPECT_NEAR(condition_diagnostics(GammaMatrix(mat({{1, 0}, {0, 1e-12}}))) / 1e12, 1.0, 1e-9);
  EXPECT_EQ(condition_diagnostics(GammaMatrix(mat({{1, 1}, {1, 1}}))),
            std::numeric_limits<double>::infinity());
  EXPECT_EQ(condition_diagnostics(GammaMatrix(Eigen::MatrixXd::Zero(2, 2))),
            std::numeric_limits<double>::infinity());
}

TEST(ConditionDiagnostics, FlagsIllConditionedSolve) {
  SolverOptions o;
  o.ridge_lambda = 0.0;
  o.conditioning_threshold = 1e6;
  const SolverReport r = solve_closed_form(GammaMatrix(mat({{1, 0}, {0, 1e-8}})), o);
  EXPECT_TRUE(r.ill_conditioned);
  EXPECT_FALSE(solve_closed_form(GammaMatrix(Eigen::MatrixXd::Identity(2, 2)), o).ill_conditioned);
}

}  // namespace
}  // namespace ttalab

namespace ttalab {
namespace {

// Plain enumeration of every lattice point, used to check the bounded search.
double brute_lattice_min(const Eigen::MatrixXd& g, long k_total) {
  const auto m = static_cast<std::size_t>(g.rows());
  std::vector<double> w(m, 0.0);
  double best = std::numeric_limits<double>::infinity();
  auto rec = [&](auto&& self, std::size_t d, long left) -> void {
    if (d + 1 == m) {
      w[d] = static_cast<double>(left) / static_cast<double>(k_total);
      best = std::min(best, testing::quad(g, w));
      return;
    }
    for (long k = 0; k <= left; ++k) {
      w[d] = static_cast<double>(k) / static_cast<double>(k_total);
      self(self, d + 1, left - k);
    }
  };
  rec(rec, 0, k_total);
  return best;
}

TEST(GridOracle, BoundedSearchMatchesFullEnumeration) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index m = 2 + t % 5;
    const Eigen::MatrixXd g = random_psd(rng, m);
    const long k_total = m <= 4 ? 40 : 20;
    const double expected = brute_lattice_min(g, k_total);
    EXPECT_NEAR(testing::simplex_grid_min(g, 1.0 / static_cast<double>(k_total)).risk, expected,
                1e-12 * (1.0 + std::abs(expected)))
        << "m=" << m;
  }
}

}  // namespace
}  // namespace ttalab
