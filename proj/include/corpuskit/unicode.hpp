#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace corpuskit::uni {

// Decodes the UTF-8 sequence starting at text[pos], advances pos past it and
// returns the code point. Malformed bytes decode as U+FFFD and advance by one
// byte, so iteration always terminates.
char32_t next_codepoint(std::string_view text, std::size_t& pos);

std::size_t count_codepoints(std::string_view text);

void append_utf8(std::string& out, char32_t cp);

bool is_whitespace(char32_t cp);         // Unicode White_Space property
bool is_letter(char32_t cp);             // general category L*
bool is_digit(char32_t cp);              // general category Nd
bool is_control_or_format(char32_t cp);  // general category Cc or Cf
bool is_alphanumeric(char32_t cp);

char32_t to_lower(char32_t cp);  // simple (locale-independent) lowercase
std::string lower(std::string_view text);

// Canonical composition (NFC). Malformed input bytes come out as U+FFFD.
std::string nfc(std::string_view text);

}  // namespace corpuskit::uni
