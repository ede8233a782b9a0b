// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "famec/scenario.hpp"

namespace famec {

/// Parses `key = value` lines; `#` starts a comment. Keys not listed in the
/// file keep their ScenarioConfig defaults. Unknown or repeated keys and bad
/// values raise ParseError with the line number; the result is validated
/// (ValidationError).
ScenarioConfig parse_config(std::string_view text);

ScenarioConfig load_config(const std::filesystem::path& path);

/// Every key with its current value; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

/// Shortest decimal text that reads back to exactly `value`.
std::string format_double(double value);

} // namespace famec
