#include "gcb/text.hpp"

#include <cctype>

namespace gcb {

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string_view> split_lines(std::string_view s)
{
    std::vector<std::string_view> out;
    for (auto line : split(s, '\n')) {
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        out.push_back(line);
    }
    while (!out.empty() && out.back().empty()) {
        out.pop_back();
    }
    return out;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::string to_lower(std::string_view s)
{
    std::string out(s);
    for (auto& ch : out) {
        ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    return out;
}

bool contains_word(std::string_view haystack, std::string_view needle)
{
    if (needle.empty()) {
        return false;
    }
    const std::string h = to_lower(haystack);
    const std::string n = to_lower(needle);
    auto is_word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
    for (auto pos = h.find(n); pos != std::string::npos; pos = h.find(n, pos + 1)) {
        const bool left_ok = pos == 0 || !is_word(h[pos - 1]);
        const auto end = pos + n.size();
        const bool right_ok = end == h.size() || !is_word(h[end]);
        if (left_ok && right_ok) {
            return true;
        }
    }
    return false;
}

std::string slugify(std::string_view s)
{
    std::string out = to_lower(trim(s));
    for (auto& ch : out) {
        if (ch == ' ') {
            ch = '_';
        }
    }
    return out;
}

}  // namespace gcb
