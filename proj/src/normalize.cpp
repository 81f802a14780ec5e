#include "corpuskit/normalize.hpp"

#include "corpuskit/unicode.hpp"

namespace corpuskit {

std::string remove_nonprinting(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = uni::next_codepoint(text, pos);
    if (cp == U'\r') {
      // "\r\n" collapses to the upcoming '\n'; a lone '\r' becomes '\n'.
      if (pos >= text.size() || text[pos] != '\n') out += '\n';
      continue;
    }
    if (cp == U'\n' || cp == U'\t' || !uni::is_control_or_format(cp))
      uni::append_utf8(out, cp);
  }
  return out;
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = uni::next_codepoint(text, pos);
    if (cp != U'\n' && uni::is_whitespace(cp))
      out += ' ';
    else
      uni::append_utf8(out, cp);
  }
  return out;
}

std::string nfc_normalize(std::string_view text) { return uni::nfc(text); }

std::string normalize_text(std::string_view text) {
  return nfc_normalize(normalize_whitespace(remove_nonprinting(text)));
}

Document normalize_document(Document doc) {
  doc.text = normalize_text(doc.text);
  if (doc.text.empty()) doc.removed_stage = std::string(stage::kNormalize);
  return doc;
}

}  // namespace corpuskit
