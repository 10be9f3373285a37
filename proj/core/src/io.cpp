#include "ttalab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ttalab/error.hpp"
#include "ttalab/json_writer.hpp"

namespace ttalab::io {
namespace {

constexpr std::string_view kPredPrefix = "pred_";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const auto line = text.substr(start, end == std::string_view::npos ? end : end - start);
    lines.push_back(line);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_finite(std::string_view cell, double& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc{} && ptr == cell.data() + cell.size() && std::isfinite(out);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open input file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

Format format_from_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return Format::csv;
  if (ext == ".json") return Format::json;
  throw InvalidArgument("cannot infer format from extension of " + path.string() +
                        "; pass --format csv|json");
}

PredictionSet parse_predictions_csv(std::string_view text) {
  using Kind = ParseError::Kind;
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(Kind::EmptyFile, "CSV input is empty", 0, 0);

  const auto header = split_cells(lines.front());
  if (header[0] != "sample_id") {
    throw ParseError(Kind::MissingColumn, "row 1, column 1: expected 'sample_id'", 1, 1);
  }
  if (header.size() < 2 || header[1] != "label") {
    throw ParseError(Kind::MissingColumn, "row 1, column 2: expected 'label'", 1, 2);
  }
  if (header.size() < 3) {
    throw ParseError(Kind::MissingColumn, "row 1: no pred_<name> columns", 1, 3);
  }
  std::vector<std::string> names;
  for (std::size_t c = 2; c < header.size(); ++c) {
    if (header[c].substr(0, kPredPrefix.size()) != kPredPrefix ||
        header[c].size() == kPredPrefix.size()) {
      throw ParseError(Kind::MissingColumn,
                       "row 1, column " + std::to_string(c + 1) + ": expected pred_<name>, got '" +
                           std::string(header[c]) + "'",
                       1, c + 1);
    }
    names.emplace_back(header[c].substr(kPredPrefix.size()));
  }
  if (lines.size() < 2) throw ParseError(Kind::EmptyFile, "CSV input has a header but no rows", 1, 0);

  const auto n = static_cast<Eigen::Index>(lines.size() - 1);
  const auto m = static_cast<Eigen::Index>(names.size());
  Eigen::VectorXd labels(n);
  Eigen::MatrixXd preds(n, m);
  for (Eigen::Index r = 0; r < n; ++r) {
    const std::size_t row = static_cast<std::size_t>(r) + 2;
    const auto cells = split_cells(lines[static_cast<std::size_t>(r) + 1]);
    if (cells.size() != header.size()) {
      throw ParseError(Kind::RaggedRows,
                       "row " + std::to_string(row) + ": " + std::to_string(cells.size()) +
                           " cells, header has " + std::to_string(header.size()),
                       row, 0);
    }
    for (std::size_t c = 1; c < cells.size(); ++c) {
      double value = 0.0;
      if (!parse_finite(cells[c], value)) {
        throw ParseError(Kind::NonNumericCell,
                         "row " + std::to_string(row) + ", column " + std::to_string(c + 1) + " (" +
                             std::string(header[c]) + "): '" + std::string(cells[c]) +
                             "' is not a finite number",
                         row, c + 1);
      }
      if (c == 1) {
        labels(r) = value;
      } else {
        preds(r, static_cast<Eigen::Index>(c - 2)) = value;
      }
    }
  }
  return PredictionSet(std::move(labels), std::move(preds), std::move(names));
}

PredictionSet parse_predictions_json(std::string_view text) {
  using Kind = ParseError::Kind;
  if (trim(text).empty()) throw ParseError(Kind::EmptyFile, "JSON input is empty");

  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(Kind::Malformed, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError(Kind::Malformed, "top-level JSON value must be an object");
  if (!doc.contains("labels") || !doc["labels"].is_array()) {
    throw ParseError(Kind::MissingColumn, "missing 'labels' array");
  }
  if (!doc.contains("predictions") || !doc["predictions"].is_object()) {
    throw ParseError(Kind::MissingColumn, "missing 'predictions' object");
  }
  const auto& jl = doc["labels"];
  const auto& jp = doc["predictions"];
  if (jl.empty()) throw ParseError(Kind::EmptyFile, "'labels' is empty");
  if (jp.empty()) throw ParseError(Kind::MissingColumn, "'predictions' has no augmentations");

  const auto n = static_cast<Eigen::Index>(jl.size());
  const auto number_at = [](const ordered_json& arr, std::size_t i, const std::string& where,
                            std::size_t column) {
    const auto& v = arr[i];
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      throw ParseError(Kind::NonNumericCell,
                       where + "[" + std::to_string(i) + "]: " + v.dump() + " is not a finite number",
                       i + 1, column);
    }
    return v.get<double>();
  };

  Eigen::VectorXd labels(n);
  for (std::size_t i = 0; i < jl.size(); ++i) labels(static_cast<Eigen::Index>(i)) = number_at(jl, i, "labels", 0);

  Eigen::MatrixXd preds(n, static_cast<Eigen::Index>(jp.size()));
  std::vector<std::string> names;
  std::size_t col = 0;
  for (const auto& [name, arr] : jp.items()) {
    const std::string where = "predictions." + name;
    if (!arr.is_array()) throw ParseError(Kind::Malformed, where + " must be an array", 0, col + 1);
    if (arr.size() != jl.size()) {
      throw ParseError(Kind::RaggedRows,
                       where + " has " + std::to_string(arr.size()) + " entries, 'labels' has " +
                           std::to_string(jl.size()),
                       0, col + 1);
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
      preds(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col)) = number_at(arr, i, where, col + 1);
    }
    names.push_back(name);
    ++col;
  }
  return PredictionSet(std::move(labels), std::move(preds), std::move(names));
}

PredictionSet load_predictions(const std::filesystem::path& path, Format format) {
  const std::string text = read_file(path);
  return format == Format::csv ? parse_predictions_csv(text) : parse_predictions_json(text);
}

PredictionSet load_predictions(const std::filesystem::path& path) {
  return load_predictions(path, format_from_path(path));
}

void write_predictions_csv(std::ostream& out, const PredictionSet& data) {
  out << "sample_id,label";
  for (const auto& name : data.augmentation_names()) out << ',' << kPredPrefix << name;
  out << '\n';
  for (Eigen::Index r = 0; r < data.labels().size(); ++r) {
    out << r << ',' << format_double(data.labels()(r));
    for (Eigen::Index c = 0; c < data.predictions().cols(); ++c) {
      out << ',' << format_double(data.predictions()(r, c));
    }
    out << '\n';
  }
}

void write_predictions_json(std::ostream& out, const PredictionSet& data) {
  ordered_json doc;
  doc["labels"] = std::vector<double>(data.labels().begin(), data.labels().end());
  ordered_json preds = ordered_json::object();
  for (std::size_t c = 0; c < data.augmentation_count(); ++c) {
    const auto col = data.predictions().col(static_cast<Eigen::Index>(c));
    preds[data.augmentation_names()[c]] = std::vector<double>(col.begin(), col.end());
  }
  doc["predictions"] = std::move(preds);
  write_json(out, doc);
}

}  // namespace ttalab::io
