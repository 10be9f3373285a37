#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

namespace ttalab::io {

using ordered_json = nlohmann::ordered_json;

// Serializes with insertion-ordered keys, two-space indent and every
// floating-point number printed with %.17g. Non-finite doubles become the
// strings "inf", "-inf" or "nan".
std::string dump_json(const ordered_json& value);
void write_json(std::ostream& out, const ordered_json& value);

}  // namespace ttalab::io
