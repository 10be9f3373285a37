#pragma once

#include <cstddef>

#include "ttalab/gamma.hpp"
#include "ttalab/weights.hpp"

namespace ttalab {

/// Knobs for the weight solvers.
///
/// `ridge_lambda` is relative: the solvers work on
///     Gamma + ridge_lambda * mean_diag(Gamma) * I
/// so the result does not depend on the scale of the data. When Gamma has a
/// zero diagonal the scale falls back to 1.
struct SolverOptions {
  double ridge_lambda = 1e-8;
  double conditioning_threshold = 1e12;
  bool projection = true;

  /// Throws InvalidArgument when ridge_lambda < 0 or conditioning_threshold <= 1.
  void validate() const;
};

struct SolverReport {
  WeightVector weights;
  /// w^T (Gamma + ridge) w.
  double achieved_risk;
  /// Condition number of the regularized matrix, see condition_diagnostics().
  double condition_estimate;
  bool ill_conditioned;
  /// 1 / (1^T A^{-1} 1) on the final support: the common value of (A w)_i.
  double lagrange_lambda;
  /// Active-set iterations; 0 for the pure closed form.
  int iterations;
};

/// Gamma + ridge_lambda * scale * I, the matrix every solver inverts.
Eigen::MatrixXd regularized(const GammaMatrix& gamma, double ridge_lambda);

/// w_i = sum_j A^{-1}_ij / sum_kj A^{-1}_kj with A the regularized Gamma.
/// Negative weights are allowed and flagged. Throws SingularGamma when an
/// LDLT pivot of A falls below 1e-14 times the largest diagonal entry.
SolverReport solve_closed_form(const GammaMatrix& gamma, const SolverOptions& opts = {});

/// Minimizer of w^T A w over the probability simplex.
///
/// Starts from the closed form and repeatedly zeroes the most negative
/// coordinate, re-solving on the remaining support. The resulting point is
/// then polished by a primal active-set loop that re-admits any zeroed
/// coordinate with a negative KKT multiplier, so the output is a true
/// simplex minimizer and not only a feasible point.
SolverReport solve_projected(const GammaMatrix& gamma, const SolverOptions& opts = {});

/// Dispatches on opts.projection.
SolverReport solve(const GammaMatrix& gamma, const SolverOptions& opts = {});

/// lambda_max / lambda_min of the symmetric eigendecomposition. Returns
/// +infinity when lambda_min <= m * eps * lambda_max (numerically singular,
/// including the zero matrix).
double condition_diagnostics(const GammaMatrix& gamma);

}  // namespace ttalab
