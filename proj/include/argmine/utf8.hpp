#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace argmine::utf8 {

// Byte offset of every code point in `text`, plus a final entry equal to
// text.size(). Throws ParseError on ill-formed UTF-8.
std::vector<std::size_t> code_point_offsets(std::string_view text);

std::size_t length(std::string_view text);

// Decodes the code points of a (well-formed) UTF-8 string.
std::u32string decode(std::string_view text);

bool is_alphabetic(char32_t cp);
bool is_digit(char32_t cp);
bool is_vowel(char32_t cp);

// Lowercases ASCII and Latin-1 letters; other bytes are copied unchanged.
std::string to_lower(std::string_view text);

}  // namespace argmine::utf8
