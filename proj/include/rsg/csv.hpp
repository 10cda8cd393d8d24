#pragma once

#include <string>
#include <vector>

namespace rsg {

/// Shortest decimal form that round-trips through a double.
std::string format_double(double value);

/// Splits one CSV line on commas (no quoting; the emitters never quote).
std::vector<std::string> split_csv_line(const std::string& line);

double parse_double(const std::string& text);

}  // namespace rsg
