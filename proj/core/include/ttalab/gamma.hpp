#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ttalab/prediction_set.hpp"

namespace ttalab {

/// Residual co-moment matrix of the augmentation strategies,
/// Gamma(i, j) = E[(y - f∘g_i(x)) (y - f∘g_j(x))].
///
/// The stored matrix is exactly symmetric: construction mirrors the upper
/// triangle onto the lower one. Positive semidefiniteness is not re-checked
/// here because user-supplied matrices (tests, pruning experiments) are also
/// admitted; `min_eigenvalue()` exposes it.
class GammaMatrix {
 public:
  /// Throws InvalidArgument for an empty, non-square or non-finite matrix.
  explicit GammaMatrix(Eigen::MatrixXd entries, std::size_t sample_count = 0);

  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t sample_count() const noexcept { return sample_count_; }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  double mean_diagonal() const noexcept;
  double min_eigenvalue() const;

  /// Principal submatrix on `indices`, in that order.
  GammaMatrix principal(const std::vector<std::size_t>& indices) const;

 private:
  Eigen::MatrixXd entries_;
  std::size_t sample_count_;
};

/// 1/N plug-in estimate: Gamma(i, j) = (1/N) sum_n (y_n - p_{n,i})(y_n - p_{n,j}).
GammaMatrix estimate_gamma(const PredictionSet& data);

}  // namespace ttalab
