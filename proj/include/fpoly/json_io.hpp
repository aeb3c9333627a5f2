#pragma once

// JSON text with doubles written at 17 significant digits and sorted keys.

#include "json.hpp"

#include <string>

namespace fpoly {

using Json = nlohmann::json;

/// "%.17g"; non-finite values become null.
std::string format_double(double x);

/// Serializes `j`; indent < 0 gives a single line.
std::string dump_json(const Json& j, int indent = 2);

}  // namespace fpoly
