#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers shared by the cleaning, validity and metric code. Character
// classes come from ICU so behaviour follows the Unicode tables.
namespace charprobe::text {

bool is_valid_utf8(std::string_view s);

// Decodes to code points. Invalid sequences become U+FFFD.
std::vector<char32_t> decode(std::string_view s);
void append_utf8(std::string& out, char32_t cp);
std::string encode(const std::vector<char32_t>& cps);

bool is_space(char32_t cp);
bool is_alnum(char32_t cp);
bool is_upper(char32_t cp);
// Unicode general category P* (Pc, Pd, Ps, Pe, Pi, Pf, Po).
bool is_punctuation(char32_t cp);
bool is_apostrophe(char32_t cp);
// Pictographic emoji plus the joiners/modifiers that glue emoji sequences.
bool is_emoji(char32_t cp);

std::string to_lower(std::string_view s);

std::vector<std::string> split_whitespace(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string trim(std::string_view s);
std::string collapse_whitespace(std::string_view s);

bool starts_with_ascii_ci(std::string_view s, std::string_view prefix);

}  // namespace charprobe::text
