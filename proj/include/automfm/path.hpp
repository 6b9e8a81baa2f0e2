#pragma once

// Element paths: slash-separated segments. A segment is either a name made of
// [A-Za-z0-9_.-] or a zero-based decimal index for unnamed list entries.

#include "automfm/error.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace automfm {

constexpr bool is_name_char(char c) noexcept
{
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.' ||
           c == '-';
}

inline bool is_valid_segment(std::string_view segment) noexcept
{
    return !segment.empty() && std::all_of(segment.begin(), segment.end(), is_name_char);
}

inline bool is_index_segment(std::string_view segment) noexcept
{
    return !segment.empty() && std::all_of(segment.begin(), segment.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Names of named list entries must not look like indices, otherwise
// "components/3" would be ambiguous.
inline bool is_valid_entry_name(std::string_view name) noexcept
{
    return is_valid_segment(name) && !is_index_segment(name);
}

inline std::optional<std::size_t> parse_index(std::string_view segment) noexcept
{
    if (!is_index_segment(segment) || segment.size() > 9)
        return std::nullopt;
    std::size_t value = 0;
    for (char c : segment)
        value = value * 10 + static_cast<std::size_t>(c - '0');
    return value;
}

inline std::vector<std::string> split_path(std::string_view path)
{
    if (path.empty())
        throw PathError("empty element path");
    std::vector<std::string> segments;
    std::size_t start = 0;
    while (true) {
        const auto slash = path.find('/', start);
        const auto segment = path.substr(start, slash == std::string_view::npos ? std::string_view::npos : slash - start);
        if (!is_valid_segment(segment))
            throw PathError("malformed element path '" + std::string(path) + "': bad segment '" + std::string(segment) +
                            "'");
        segments.emplace_back(segment);
        if (slash == std::string_view::npos)
            break;
        start = slash + 1;
    }
    return segments;
}

inline bool is_valid_path(std::string_view path) noexcept
{
    try {
        split_path(path);
        return true;
    }
    catch (const PathError&) {
        return false;
    }
}

inline std::string join_path(const std::vector<std::string>& segments)
{
    std::string out;
    for (const auto& segment : segments) {
        if (!out.empty())
            out += '/';
        out += segment;
    }
    return out;
}

// True when path equals ancestor or lies beneath it.
inline bool path_within(std::string_view path, std::string_view ancestor) noexcept
{
    if (path.size() < ancestor.size() || path.substr(0, ancestor.size()) != ancestor)
        return false;
    return path.size() == ancestor.size() || path[ancestor.size()] == '/';
}

}  // namespace automfm
