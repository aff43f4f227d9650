#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kgforge::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
// Lowercases and collapses runs of whitespace into single spaces.
std::string normalize_space(std::string_view s);
std::vector<std::string> split_lines(std::string_view s);
bool icontains(std::string_view haystack, std::string_view needle);

}  // namespace kgforge::text
