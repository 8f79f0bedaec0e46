#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace opmeans {

// Shortest decimal form that round-trips.
std::string format_double(double x);
// Strict parse of a whole string as a double; throws InvalidArgument.
double parse_double(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

}  // namespace opmeans
