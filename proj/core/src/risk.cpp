#include "ttalab/risk.hpp"

#include <string>

#include "ttalab/error.hpp"

namespace ttalab {
namespace {

void require_dims(std::size_t expected, const WeightVector& w, const char* who) {
  if (w.size() != expected) {
    throw InvalidArgument(std::string(who) + ": " + std::to_string(w.size()) +
                          " weights for " + std::to_string(expected) + " augmentations");
  }
}

}  // namespace

double weighted_risk(const GammaMatrix& gamma, const WeightVector& w) {
  require_dims(gamma.size(), w, "weighted_risk");
  return w.values().dot(gamma.entries() * w.values());
}

double direct_risk(const PredictionSet& data, const WeightVector& w) {
  require_dims(data.augmentation_count(), w, "direct_risk");
  const Eigen::VectorXd combined = data.predictions() * w.values();
  return (data.labels() - combined).squaredNorm() / static_cast<double>(data.sample_count());
}

Eigen::VectorXd per_augmentation_error(const PredictionSet& data) {
  return data.residuals().colwise().squaredNorm().transpose() /
         static_cast<double>(data.sample_count());
}

DecompositionReport decompose(const PredictionSet& data, const WeightVector& w) {
  require_dims(data.augmentation_count(), w, "decompose");
  if (w.negative_weights_present()) {
    throw InvalidArgument("decompose: weights must be nonnegative");
  }
  const auto n = static_cast<double>(data.sample_count());
  const Eigen::VectorXd combined = data.predictions() * w.values();
  const Eigen::MatrixXd spread = data.predictions().colwise() - combined;

  DecompositionReport report;
  report.per_aug_error = per_augmentation_error(data);
  report.per_aug_ambiguity = spread.colwise().squaredNorm().transpose() / n;
  report.weighted_error = w.values().dot(report.per_aug_error);
  report.weighted_ambiguity = w.values().dot(report.per_aug_ambiguity);
  report.total_risk = report.weighted_error - report.weighted_ambiguity;
  return report;
}

}  // namespace ttalab
