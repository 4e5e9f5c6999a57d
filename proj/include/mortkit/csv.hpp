#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mortkit::csv {

/// Splits one line on commas; fields are trimmed of surrounding whitespace.
std::vector<std::string> split_line(std::string_view line);

/// Splits text into lines, dropping trailing '\r'.
std::vector<std::string> split_lines(std::string_view text);

/// Strict double parser: the whole field must be numeric.
/// Returns false on empty or malformed input.
bool parse_number(std::string_view field, double& out);

/// Fixed-point formatting, e.g. fixed(0.16642, 5) == "0.16642".
std::string fixed(double value, int decimals);

}  // namespace mortkit::csv
