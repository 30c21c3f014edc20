#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hermspec {

/// 17 significant digits; round-trips every finite double.
std::string format_double(double value);

std::vector<std::string_view> split_whitespace(std::string_view text);
std::string_view trim(std::string_view text);

/// Whole-token parse; throws InputError naming `what` on failure.
double parse_double(std::string_view token, std::string_view what);
long long parse_integer(std::string_view token, std::string_view what);

}  // namespace hermspec
