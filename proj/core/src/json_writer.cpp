#include "ttalab/json_writer.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include "ttalab/io.hpp"

namespace ttalab::io {
namespace {

void emit(std::ostream& out, const ordered_json& value, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (value.type()) {
    case ordered_json::value_t::object: {
      if (value.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out << ",\n";
        first = false;
        out << pad << ordered_json(key).dump() << ": ";
        emit(out, item, depth + 1);
      }
      out << '\n' << close_pad << '}';
      return;
    }
    case ordered_json::value_t::array: {
      if (value.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      bool first = true;
      for (const auto& item : value) {
        if (!first) out << ",\n";
        first = false;
        out << pad;
        emit(out, item, depth + 1);
      }
      out << '\n' << close_pad << ']';
      return;
    }
    case ordered_json::value_t::number_float: {
      const double v = value.get<double>();
      if (std::isfinite(v)) {
        out << format_double(v);
      } else if (std::isnan(v)) {
        out << "\"nan\"";
      } else {
        out << (v > 0 ? "\"inf\"" : "\"-inf\"");
      }
      return;
    }
    default:
      out << value.dump();
  }
}

}  // namespace

void write_json(std::ostream& out, const ordered_json& value) {
  emit(out, value, 0);
  out << '\n';
}

std::string dump_json(const ordered_json& value) {
  std::ostringstream out;
  write_json(out, value);
  return out.str();
}

}  // namespace ttalab::io
