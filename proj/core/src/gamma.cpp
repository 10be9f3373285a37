#include "ttalab/gamma.hpp"

#include <utility>

#include "ttalab/error.hpp"

namespace ttalab {

GammaMatrix::GammaMatrix(Eigen::MatrixXd entries, std::size_t sample_count)
    : entries_(std::move(entries)), sample_count_(sample_count) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw InvalidArgument("GammaMatrix: expected a non-empty square matrix");
  }
  if (!entries_.allFinite()) throw InvalidArgument("GammaMatrix: non-finite entry");
  for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < entries_.rows(); ++i) entries_(i, j) = entries_(j, i);
  }
}

double GammaMatrix::mean_diagonal() const noexcept {
  return entries_.diagonal().mean();
}

double GammaMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(entries_, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

GammaMatrix GammaMatrix::principal(const std::vector<std::size_t>& indices) const {
  const auto k = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      sub(a, b) = (*this)(indices[static_cast<std::size_t>(a)], indices[static_cast<std::size_t>(b)]);
    }
  }
  return GammaMatrix(std::move(sub), sample_count_);
}

GammaMatrix estimate_gamma(const PredictionSet& data) {
  const Eigen::MatrixXd r = data.residuals();
  const auto n = static_cast<double>(data.sample_count());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(r.cols(), r.cols());
  g.selfadjointView<Eigen::Upper>().rankUpdate(r.transpose(), 1.0 / n);
  // GammaMatrix mirrors the upper triangle, which is all rankUpdate fills.
  return GammaMatrix(std::move(g), data.sample_count());
}

}  // namespace ttalab
