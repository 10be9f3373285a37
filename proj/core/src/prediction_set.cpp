#include "ttalab/prediction_set.hpp"

#include <string>
#include <utility>

#include "ttalab/error.hpp"

namespace ttalab {

ParseError::ParseError(Kind kind, std::string message, std::size_t row, std::size_t column)
    : Error(std::move(message)), kind_(kind), row_(row), column_(column) {}

const char* to_string(ParseError::Kind kind) noexcept {
  switch (kind) {
    case ParseError::Kind::MissingColumn: return "MissingColumn";
    case ParseError::Kind::RaggedRows: return "RaggedRows";
    case ParseError::Kind::NonNumericCell: return "NonNumericCell";
    case ParseError::Kind::EmptyFile: return "EmptyFile";
    case ParseError::Kind::Malformed: return "Malformed";
  }
  return "Unknown";
}

std::vector<std::string> default_augmentation_names(std::size_t m) {
  std::vector<std::string> names;
  names.reserve(m);
  for (std::size_t i = 0; i < m; ++i) names.push_back("aug_" + std::to_string(i));
  return names;
}

PredictionSet::PredictionSet(Eigen::VectorXd labels, Eigen::MatrixXd predictions,
                             std::vector<std::string> augmentation_names)
    : labels_(std::move(labels)),
      predictions_(std::move(predictions)),
      names_(std::move(augmentation_names)) {
  if (labels_.size() == 0) throw InvalidArgument("PredictionSet: no samples");
  if (predictions_.cols() == 0) throw InvalidArgument("PredictionSet: no augmentation columns");
  if (predictions_.rows() != labels_.size()) {
    throw InvalidArgument("PredictionSet: " + std::to_string(predictions_.rows()) +
                          " prediction rows for " + std::to_string(labels_.size()) + " labels");
  }
  if (static_cast<Eigen::Index>(names_.size()) != predictions_.cols()) {
    throw InvalidArgument("PredictionSet: " + std::to_string(names_.size()) + " names for " +
                          std::to_string(predictions_.cols()) + " columns");
  }
  if (!labels_.allFinite()) throw InvalidArgument("PredictionSet: non-finite label");
  if (!predictions_.allFinite()) throw InvalidArgument("PredictionSet: non-finite prediction");
}

PredictionSet::PredictionSet(Eigen::VectorXd labels, Eigen::MatrixXd predictions)
    : PredictionSet(std::move(labels), predictions,
                    default_augmentation_names(static_cast<std::size_t>(predictions.cols()))) {}

Eigen::MatrixXd PredictionSet::residuals() const {
  return (-predictions_).colwise() + labels_;
}

PredictionSet PredictionSet::select(const std::vector<std::size_t>& columns) const {
  Eigen::MatrixXd sub(predictions_.rows(), static_cast<Eigen::Index>(columns.size()));
  std::vector<std::string> names;
  names.reserve(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] >= augmentation_count()) throw InvalidArgument("select: column out of range");
    sub.col(static_cast<Eigen::Index>(c)) = predictions_.col(static_cast<Eigen::Index>(columns[c]));
    names.push_back(names_[columns[c]]);
  }
  return PredictionSet(labels_, std::move(sub), std::move(names));
}

bool operator==(const PredictionSet& a, const PredictionSet& b) {
  return a.names_ == b.names_ && a.labels_.size() == b.labels_.size() &&
         a.predictions_.rows() == b.predictions_.rows() &&
         a.predictions_.cols() == b.predictions_.cols() && a.labels_ == b.labels_ &&
         a.predictions_ == b.predictions_;
}

}  // namespace ttalab
