#pragma once

#include <cstddef>
#include <string_view>

#include <Eigen/Dense>

namespace ttalab {

enum class WeightProvenance { uniform, closed_form_raw, closed_form_projected };

std::string_view to_string(WeightProvenance p) noexcept;

/// Combination weights over m augmentation strategies.
///
/// Always sums to one within 1e-12. Uniform and projected weights are
/// nonnegative; raw closed-form weights may carry negative entries, which is
/// recorded in `negative_weights_present()`.
class WeightVector {
 public:
  /// Throws InvalidArgument on empty/non-finite input, a sum off by more
  /// than 1e-12, or negative entries under a provenance that forbids them.
  WeightVector(Eigen::VectorXd weights, WeightProvenance provenance);

  static WeightVector uniform(std::size_t m);

  std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.size()); }
  const Eigen::VectorXd& values() const noexcept { return weights_; }
  double operator[](std::size_t i) const { return weights_(static_cast<Eigen::Index>(i)); }
  WeightProvenance provenance() const noexcept { return provenance_; }
  bool negative_weights_present() const noexcept { return negative_; }

 private:
  Eigen::VectorXd weights_;
  WeightProvenance provenance_;
  bool negative_;
};

inline constexpr double kWeightSumTolerance = 1e-12;

}  // namespace ttalab
