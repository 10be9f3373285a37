#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ttalab {

/// Labels and per-augmentation predictions of one fixed model on a labeled
/// calibration set. Column i of `predictions()` holds the model output on the
/// i-th augmented view of every sample.
///
/// Invariants (checked on construction, never relaxed afterwards):
///   - at least one sample and one augmentation;
///   - predictions has one row per label and one column per name;
///   - every value is finite.
class PredictionSet {
 public:
  /// Throws InvalidArgument when an invariant is violated.
  PredictionSet(Eigen::VectorXd labels, Eigen::MatrixXd predictions,
                std::vector<std::string> augmentation_names);

  /// Same as above with names aug_0 .. aug_{m-1}.
  PredictionSet(Eigen::VectorXd labels, Eigen::MatrixXd predictions);

  std::size_t sample_count() const noexcept { return static_cast<std::size_t>(labels_.size()); }
  std::size_t augmentation_count() const noexcept {
    return static_cast<std::size_t>(predictions_.cols());
  }

  const Eigen::VectorXd& labels() const noexcept { return labels_; }
  const Eigen::MatrixXd& predictions() const noexcept { return predictions_; }
  const std::vector<std::string>& augmentation_names() const noexcept { return names_; }

  /// Residual matrix R with R(n, i) = y_n - p_{n,i}.
  Eigen::MatrixXd residuals() const;

  /// Restricts the set to the given columns, in the given order.
  PredictionSet select(const std::vector<std::size_t>& columns) const;

  friend bool operator==(const PredictionSet& a, const PredictionSet& b);

 private:
  Eigen::VectorXd labels_;
  Eigen::MatrixXd predictions_;
  std::vector<std::string> names_;
};

std::vector<std::string> default_augmentation_names(std::size_t m);

}  // namespace ttalab
