#pragma once

#include <Eigen/Dense>

#include "ttalab/gamma.hpp"
#include "ttalab/prediction_set.hpp"
#include "ttalab/weights.hpp"

namespace ttalab {

/// Quadratic form w^T Gamma w over the full double sum.
double weighted_risk(const GammaMatrix& gamma, const WeightVector& w);

/// Mean over samples of (y_n - sum_i w_i p_{n,i})^2. Never touches Gamma.
double direct_risk(const PredictionSet& data, const WeightVector& w);

/// Squared-error risk of each augmentation column on its own.
Eigen::VectorXd per_augmentation_error(const PredictionSet& data);

/// Error/ambiguity split of the weighted TTA risk:
///   total_risk = sum_i w_i err_i - sum_i w_i amb_i
/// with err_i = mean_n (y_n - p_{n,i})^2 and
///      amb_i = mean_n (p_{n,i} - sum_j w_j p_{n,j})^2.
struct DecompositionReport {
  Eigen::VectorXd per_aug_error;
  Eigen::VectorXd per_aug_ambiguity;
  double weighted_error = 0.0;
  double weighted_ambiguity = 0.0;
  double total_risk = 0.0;
};

/// Requires nonnegative weights. `total_risk` is the difference of the two
/// weighted sums; compare it against direct_risk() for an independent check.
DecompositionReport decompose(const PredictionSet& data, const WeightVector& w);

}  // namespace ttalab
