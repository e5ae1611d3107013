#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gcb {

std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<std::string_view> split_lines(std::string_view s);
std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

/// True if `needle` occurs in `haystack` bounded by non-alphanumerics.
/// Comparison is case-insensitive.
bool contains_word(std::string_view haystack, std::string_view needle);

/// Lowercase, spaces to underscores; used for mask file names.
std::string slugify(std::string_view s);

}  // namespace gcb
