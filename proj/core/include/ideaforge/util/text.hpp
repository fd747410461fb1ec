#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ideaforge::util {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

// Splits on a delimiter character; no empty-segment suppression.
std::vector<std::string> split(std::string_view s, char delim);
std::vector<std::string> split_lines(std::string_view s);

bool starts_with_icase(std::string_view s, std::string_view prefix);
bool contains_icase(std::string_view haystack, std::string_view needle);

// Replaces every occurrence of `from` with `to`.
std::string replace_all(std::string s, std::string_view from,
                        std::string_view to);

// Whitespace-delimited word count.
size_t word_count(std::string_view s);

// Crude token estimate used for prompt budgeting: ceil(chars / 4).
size_t approx_tokens(std::string_view s);

}  // namespace ideaforge::util
