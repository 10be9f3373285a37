#include "ttalab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ttalab/error.hpp"

namespace ttalab {
namespace {

constexpr double kPivotTolerance = 1e-14;

double condition_of(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
  const double hi = eig.eigenvalues().maxCoeff();
  const double lo = eig.eigenvalues().minCoeff();
  const double floor =
      static_cast<double>(a.rows()) * std::numeric_limits<double>::epsilon() * hi;
  if (!(hi > 0.0) || lo <= floor) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

struct SupportSolution {
  Eigen::VectorXd weights;  // one entry per support index
  double lagrange;
};

// Equality-constrained minimizer of w^T A w with sum(w) = 1 restricted to
// `support`: w = A_S^{-1} 1 / (1^T A_S^{-1} 1).
SupportSolution solve_on_support(const Eigen::MatrixXd& a, const std::vector<Eigen::Index>& support) {
  const auto k = static_cast<Eigen::Index>(support.size());
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = a(support[i], support[j]);
  }
  const double scale = sub.diagonal().cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw SingularGamma("Gamma is zero on the active support");

  Eigen::LDLT<Eigen::MatrixXd> ldlt(sub);
  if (ldlt.info() != Eigen::Success ||
      ldlt.vectorD().cwiseAbs().minCoeff() < kPivotTolerance * scale) {
    throw SingularGamma("Gamma is numerically singular (pivot below 1e-14 x scale); "
                        "increase ridge_lambda");
  }
  const Eigen::VectorXd x = ldlt.solve(Eigen::VectorXd::Ones(k));
  const double total = x.sum();
  if (!std::isfinite(total) || std::abs(total) < kPivotTolerance * x.cwiseAbs().sum()) {
    throw SingularGamma("1^T Gamma^{-1} 1 vanishes; closed-form weights are undefined");
  }
  SupportSolution out{x / total, 1.0 / total};
  out.weights /= out.weights.sum();
  return out;
}

std::vector<Eigen::Index> full_support(Eigen::Index m) {
  std::vector<Eigen::Index> s(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) s[static_cast<std::size_t>(i)] = i;
  return s;
}

Eigen::VectorXd scatter(const SupportSolution& sol, const std::vector<Eigen::Index>& support,
                        Eigen::Index m) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  for (std::size_t i = 0; i < support.size(); ++i) {
    w(support[i]) = sol.weights(static_cast<Eigen::Index>(i));
  }
  return w;
}

// Index (into `support`) of the most negative weight, or -1. Lowest index wins ties.
Eigen::Index most_negative(const Eigen::VectorXd& w) {
  Eigen::Index best = -1;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) < 0.0 && (best < 0 || w(i) < w(best))) best = i;
  }
  return best;
}

SolverReport make_report(const Eigen::MatrixXd& a, Eigen::VectorXd w, WeightProvenance provenance,
                         double lagrange, int iterations, const SolverOptions& opts) {
  w /= w.sum();
  const double risk = w.dot(a * w);
  const double cond = condition_of(a);
  return SolverReport{WeightVector(std::move(w), provenance), risk, cond,
                      cond > opts.conditioning_threshold, lagrange, iterations};
}

}  // namespace

void SolverOptions::validate() const {
  if (!(ridge_lambda >= 0.0) || !std::isfinite(ridge_lambda)) {
    throw InvalidArgument("SolverOptions: ridge_lambda must be a finite value >= 0");
  }
  if (!(conditioning_threshold > 1.0)) {
    throw InvalidArgument("SolverOptions: conditioning_threshold must exceed 1");
  }
}

Eigen::MatrixXd regularized(const GammaMatrix& gamma, double ridge_lambda) {
  double scale = gamma.mean_diagonal();
  if (!(scale > 0.0)) scale = 1.0;
  Eigen::MatrixXd a = gamma.entries();
  a.diagonal().array() += ridge_lambda * scale;
  return a;
}

double condition_diagnostics(const GammaMatrix& gamma) {
  return condition_of(gamma.entries());
}

SolverReport solve_closed_form(const GammaMatrix& gamma, const SolverOptions& opts) {
  opts.validate();
  const Eigen::MatrixXd a = regularized(gamma, opts.ridge_lambda);
  const auto support = full_support(a.rows());
  const SupportSolution sol = solve_on_support(a, support);
  return make_report(a, sol.weights, WeightProvenance::closed_form_raw, sol.lagrange, 0, opts);
}

SolverReport solve_projected(const GammaMatrix& gamma, const SolverOptions& opts) {
  opts.validate();
  const Eigen::MatrixXd a = regularized(gamma, opts.ridge_lambda);
  const Eigen::Index m = a.rows();
  const int max_iterations = 10 * static_cast<int>(m) + 50;
  int iterations = 0;

  // Phase 1: drop the most negative coordinate until the closed form on the
  // remaining support is nonnegative.
  std::vector<Eigen::Index> support = full_support(m);
  SupportSolution sol = solve_on_support(a, support);
  for (Eigen::Index neg = most_negative(sol.weights); neg >= 0; neg = most_negative(sol.weights)) {
    support.erase(support.begin() + neg);
    if (support.empty()) throw NonConvergence("solve_projected: support became empty");
    sol = solve_on_support(a, support);
    ++iterations;
  }
  Eigen::VectorXd w = scatter(sol, support, m);
  double lagrange = sol.lagrange;

  // Phase 2: primal active set. A zeroed coordinate j with (A w)_j < lambda
  // has a negative multiplier for w_j >= 0 and must be re-admitted.
  const double tol = 1e-12 * a.diagonal().cwiseAbs().maxCoeff();
  while (true) {
    const Eigen::VectorXd grad = a * w;
    Eigen::Index enter = -1;
    double worst = -tol;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (std::find(support.begin(), support.end(), j) != support.end()) continue;
      const double mult = grad(j) - lagrange;
      if (mult < worst) {
        worst = mult;
        enter = j;
      }
    }
    if (enter < 0) break;
    support.insert(std::upper_bound(support.begin(), support.end(), enter), enter);

    while (true) {
      if (++iterations > max_iterations) {
        throw NonConvergence("solve_projected: active set did not settle after " +
                             std::to_string(max_iterations) + " iterations");
      }
      sol = solve_on_support(a, support);
      const Eigen::VectorXd target = scatter(sol, support, m);
      if (most_negative(sol.weights) < 0) {
        w = target;
        lagrange = sol.lagrange;
        break;
      }
      // Step toward the target until the first coordinate hits zero.
      double step = 1.0;
      Eigen::Index blocking = -1;
      for (const Eigen::Index i : support) {
        const double d = target(i) - w(i);
        if (d < 0.0 && target(i) < 0.0) {
          const double t = w(i) / -d;
          if (t < step) {
            step = t;
            blocking = i;
          }
        }
      }
      w += step * (target - w);
      if (blocking >= 0) {
        w(blocking) = 0.0;
        support.erase(std::find(support.begin(), support.end(), blocking));
      }
      for (Eigen::Index i = 0; i < m; ++i) w(i) = std::max(w(i), 0.0);
      if (support.empty()) throw NonConvergence("solve_projected: support became empty");
    }
  }

  return make_report(a, std::move(w), WeightProvenance::closed_form_projected, lagrange,
                     iterations, opts);
}

SolverReport solve(const GammaMatrix& gamma, const SolverOptions& opts) {
  return opts.projection ? solve_projected(gamma, opts) : solve_closed_form(gamma, opts);
}

}  // namespace ttalab
