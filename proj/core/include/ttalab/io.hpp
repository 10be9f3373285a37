#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "ttalab/prediction_set.hpp"

namespace ttalab::io {

enum class Format { csv, json };

/// Picks a format from the file extension (.csv / .json); throws
/// InvalidArgument otherwise.
Format format_from_path(const std::filesystem::path& path);

/// CSV: header `sample_id,label,pred_<name_1>,...,pred_<name_m>`, one row per
/// sample. JSON: {"labels": [...], "predictions": {"<name>": [...], ...}}.
/// Column/key order defines the augmentation index order.
///
/// Throws ParseError (MissingColumn, RaggedRows, NonNumericCell, EmptyFile)
/// with the offending location.
PredictionSet parse_predictions_csv(std::string_view text);
PredictionSet parse_predictions_json(std::string_view text);
PredictionSet load_predictions(const std::filesystem::path& path, Format format);
PredictionSet load_predictions(const std::filesystem::path& path);

/// Round-trip-exact writers (17 significant digits).
void write_predictions_csv(std::ostream& out, const PredictionSet& data);
void write_predictions_json(std::ostream& out, const PredictionSet& data);

std::string format_double(double value);

}  // namespace ttalab::io
