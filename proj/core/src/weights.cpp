#include "ttalab/weights.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "ttalab/error.hpp"

namespace ttalab {

std::string_view to_string(WeightProvenance p) noexcept {
  switch (p) {
    case WeightProvenance::uniform: return "uniform";
    case WeightProvenance::closed_form_raw: return "closed_form_raw";
    case WeightProvenance::closed_form_projected: return "closed_form_projected";
  }
  return "unknown";
}

WeightVector::WeightVector(Eigen::VectorXd weights, WeightProvenance provenance)
    : weights_(std::move(weights)), provenance_(provenance), negative_(false) {
  if (weights_.size() == 0) throw InvalidArgument("WeightVector: empty");
  if (!weights_.allFinite()) throw InvalidArgument("WeightVector: non-finite weight");
  const double sum = weights_.sum();
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    throw InvalidArgument("WeightVector: weights sum to " + std::to_string(sum) + ", not 1");
  }
  negative_ = (weights_.array() < 0.0).any();
  if (negative_ && provenance_ != WeightProvenance::closed_form_raw) {
    throw InvalidArgument("WeightVector: negative weight under " +
                          std::string(to_string(provenance_)) + " provenance");
  }
}

WeightVector WeightVector::uniform(std::size_t m) {
  if (m == 0) throw InvalidArgument("WeightVector::uniform: m must be positive");
  return WeightVector(
      Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m), 1.0 / static_cast<double>(m)),
      WeightProvenance::uniform);
}

}  // namespace ttalab
