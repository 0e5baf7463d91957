#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace condgreedy::detail {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

/// Fixed significant digits, for human-facing reports.
std::string format_sig(double x, int digits);

/// Splits on `sep` at bracket/parenthesis depth zero.
std::vector<std::string> split_top_level(std::string_view text, char sep);

std::string_view trim(std::string_view s);

/// Strict full-string parses; throw std::invalid_argument.
double parse_double(std::string_view s);
long long parse_int(std::string_view s);

}  // namespace condgreedy::detail
