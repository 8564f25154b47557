#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace accesswalk {

/// Shortest decimal text that parses back to the same double ("nan" for NaN).
std::string format_double(double value);

/// Splits one CSV record. Double-quoted fields may contain commas and "".
/// Surrounding whitespace and a trailing '\r' are stripped.
std::vector<std::string> split_csv(std::string_view line);

/// Quotes a CSV field only when it needs it.
std::string csv_field(std::string_view text);

double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::string& path);

}  // namespace accesswalk
