#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers shared by the corpus, prompting and labeling modules.
namespace rbam::text {

/// Decodes UTF-8 into code points. Invalid bytes decode as U+FFFD, one per byte.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

bool is_unicode_space(char32_t c);

/// Number of code points.
std::size_t char_count(std::string_view s);

/// Number of maximal runs of non-whitespace code points.
std::size_t word_count(std::string_view s);

/// Trims Unicode whitespace on both ends.
std::string trim(std::string_view s);

std::string ascii_lower(std::string_view s);

/// Substring by code-point offsets [begin, end), clamped to the string.
std::string slice_code_points(std::string_view s, std::size_t begin, std::size_t end);

std::vector<std::string> split(std::string_view s, char sep);

bool starts_with_ci(std::string_view s, std::string_view prefix);

}  // namespace rbam::text
