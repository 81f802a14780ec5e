#include "corpuskit/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <stdexcept>

namespace corpuskit::uni {

char32_t next_codepoint(std::string_view text, std::size_t& pos) {
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  std::int32_t i = static_cast<std::int32_t>(pos);
  const std::int32_t len = static_cast<std::int32_t>(text.size());
  UChar32 cp;
  U8_NEXT(bytes, i, len, cp);
  if (cp < 0) {  // malformed sequence
    cp = 0xFFFD;
  }
  pos = static_cast<std::size_t>(i);
  return static_cast<char32_t>(cp);
}

std::size_t count_codepoints(std::string_view text) {
  std::size_t n = 0;
  for (std::size_t pos = 0; pos < text.size(); ++n) next_codepoint(text, pos);
  return n;
}

void append_utf8(std::string& out, char32_t cp) {
  std::uint8_t buf[U8_MAX_LENGTH];
  std::int32_t i = 0;
  UBool err = false;
  U8_APPEND(buf, i, U8_MAX_LENGTH, static_cast<UChar32>(cp), err);
  if (err) {  // not a Unicode scalar value
    out += "\xEF\xBF\xBD";
    return;
  }
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(i));
}

bool is_whitespace(char32_t cp) {
  return u_isUWhiteSpace(static_cast<UChar32>(cp));
}

bool is_letter(char32_t cp) { return u_isalpha(static_cast<UChar32>(cp)); }

bool is_digit(char32_t cp) {
  return u_charType(static_cast<UChar32>(cp)) == U_DECIMAL_DIGIT_NUMBER;
}

bool is_control_or_format(char32_t cp) {
  const std::int8_t type = u_charType(static_cast<UChar32>(cp));
  return type == U_CONTROL_CHAR || type == U_FORMAT_CHAR;
}

bool is_alphanumeric(char32_t cp) { return is_letter(cp) || is_digit(cp); }

char32_t to_lower(char32_t cp) {
  return static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
}

std::string lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) append_utf8(out, to_lower(next_codepoint(text, pos)));
  return out;
}

std::string nfc(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("NFC normalizer unavailable");
  std::string out;
  icu::StringByteSink<std::string> sink(&out);
  norm->normalizeUTF8(0, icu::StringPiece(text.data(), static_cast<int>(text.size())),
                      sink, nullptr, status);
  if (U_FAILURE(status)) throw std::runtime_error("NFC normalization failed");
  return out;
}

}  // namespace corpuskit::uni
