#include "corpuskit/metrics.hpp"

#include <openssl/evp.h>

#include <stdexcept>

#include "corpuskit/textutil.hpp"
#include "corpuskit/unicode.hpp"

namespace corpuskit {

namespace {

bool is_terminator(char32_t cp) { return cp == U'.' || cp == U'!' || cp == U'?'; }

}  // namespace

std::uint64_t count_chars(std::string_view text) {
  return uni::count_codepoints(text);
}

std::uint64_t count_utf8_bytes(std::string_view text) { return text.size(); }

std::uint64_t count_words(std::string_view text) { return tokens(text).size(); }

std::uint64_t count_sentences(std::string_view text) {
  std::uint64_t sentences = 0;
  bool segment_has_content = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = uni::next_codepoint(text, pos);
    if (is_terminator(cp)) {
      // Swallow the whole terminator run, then see what follows it.
      std::size_t after = pos;
      while (after < text.size()) {
        std::size_t peek = after;
        if (!is_terminator(uni::next_codepoint(text, peek))) break;
        after = peek;
      }
      std::size_t peek = after;
      const bool at_boundary =
          after >= text.size() || uni::is_whitespace(uni::next_codepoint(text, peek));
      if (at_boundary) {
        if (segment_has_content) ++sentences;
        segment_has_content = false;
        pos = after;
        continue;
      }
      segment_has_content = true;  // e.g. "3.14": the dot is sentence content
      pos = after;
      continue;
    }
    if (!uni::is_whitespace(cp)) segment_has_content = true;
  }
  if (segment_has_content) ++sentences;
  return sentences;
}

std::string md5_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_md5(), nullptr) != 1)
    throw std::runtime_error("MD5 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

DocumentMetrics compute_metrics(std::string_view text,
                                const LanguageClassifier& classifier) {
  DocumentMetrics m;
  m.lang = classifier.identify(text).lang;
  m.num_chars = count_chars(text);
  m.num_utf8bytes = count_utf8_bytes(text);
  m.num_words = count_words(text);
  m.num_sents = count_sentences(text);
  m.md5 = md5_hex(text);
  return m;
}

Document annotate_metrics(Document doc, const LanguageClassifier& classifier) {
  doc.metrics = compute_metrics(doc.text, classifier);
  return doc;
}

}  // namespace corpuskit
