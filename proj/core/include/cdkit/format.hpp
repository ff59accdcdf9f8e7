#pragma once

#include <string>
#include <string_view>

namespace cdkit {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double x);

/// Parses a full token as a double; throws std::invalid_argument otherwise.
double parse_double(std::string_view token);

}  // namespace cdkit
