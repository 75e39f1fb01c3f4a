#pragma once

#include <string>

#include "json.hpp"

namespace topoderiv {

/// %.17g; non-finite values become null in JSON and nan/inf in CSV.
std::string format_double(double v);

/// JSON text with every float written at 17 significant digits, object keys
/// in sorted order, two-space indentation and a trailing newline.
std::string dump_json(const nlohmann::json& j);

/// Writes text to path, throwing std::runtime_error on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace topoderiv
