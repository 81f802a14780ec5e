#include "corpuskit/textutil.hpp"

#include "corpuskit/unicode.hpp"

namespace corpuskit {

std::vector<std::string_view> tokens(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  std::size_t token_start = std::string_view::npos;
  while (pos < text.size()) {
    const std::size_t cp_start = pos;
    const char32_t cp = uni::next_codepoint(text, pos);
    if (uni::is_whitespace(cp)) {
      if (token_start != std::string_view::npos) {
        out.push_back(text.substr(token_start, cp_start - token_start));
        token_start = std::string_view::npos;
      }
    } else if (token_start == std::string_view::npos) {
      token_start = cp_start;
    }
  }
  if (token_start != std::string_view::npos) out.push_back(text.substr(token_start));
  return out;
}

std::string word_key(std::string_view token) {
  // Find the first and last alphanumeric code point, then lowercase the span.
  std::size_t begin = token.size();
  std::size_t end = 0;
  std::size_t pos = 0;
  while (pos < token.size()) {
    const std::size_t cp_start = pos;
    const char32_t cp = uni::next_codepoint(token, pos);
    if (uni::is_alphanumeric(cp)) {
      if (cp_start < begin) begin = cp_start;
      end = pos;
    }
  }
  if (begin >= end) return {};
  return uni::lower(token.substr(begin, end - begin));
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

std::vector<std::string_view> split_paragraphs(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t sep = text.find("\n\n", start);
    if (sep == std::string_view::npos) {
      if (start < text.size()) out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, sep - start));
    start = sep + 2;
  }
  return out;
}

bool has_nonspace(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size())
    if (!uni::is_whitespace(uni::next_codepoint(s, pos))) return true;
  return false;
}

}  // namespace corpuskit
