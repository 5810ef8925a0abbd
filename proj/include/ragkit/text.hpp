#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ragkit {

// Returns false and sets bad_offset to the first offending byte when the
// input is not valid UTF-8.
bool validate_utf8(std::string_view text, std::size_t* bad_offset);

// Decodes the codepoint starting at `pos`, advancing `pos` past it. Invalid
// bytes are consumed one at a time and reported as U+FFFD.
char32_t decode_utf8(std::string_view text, std::size_t& pos);

// CJK here means Han ideographs, kana and hangul; used by the tokenizer and
// the metric normalizer, where each such codepoint is its own token.
bool is_cjk(char32_t cp);

bool is_blank_line(std::string_view line);

std::string to_lower(std::string_view s); // ASCII-only lowering
std::string trim(std::string_view s);
std::string rtrim(std::string_view s);

// Collapses interior whitespace runs to a single space and trims the ends.
std::string collapse_whitespace(std::string_view s);

std::vector<std::string> split_lines(std::string_view text);
std::vector<std::string> split_on_any(std::string_view text, std::string_view ascii_delims);

bool starts_with(std::string_view s, std::string_view prefix);

// Blank-line-delimited blocks; interior blank runs act as one delimiter.
std::vector<std::string> split_paragraphs(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

} // namespace ragkit
