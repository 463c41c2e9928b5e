#pragma once

#include <string>
#include <vector>

namespace freeproj {

// Shortest round-trip decimal form of a double ("." decimal point, C locale).
std::string format_double(double value);

// One CSV line from fields, comma separated, LF terminated by the caller.
std::string csv_join(const std::vector<std::string>& fields);

// Minimal CSV reader for the numeric files this tool writes: splits lines on
// commas, no quoting support needed.
std::vector<std::vector<std::string>> csv_read(const std::string& text);

}  // namespace freeproj
