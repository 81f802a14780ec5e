#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "corpuskit/document.hpp"
#include "corpuskit/langid.hpp"

namespace corpuskit {

std::uint64_t count_chars(std::string_view text);       // Unicode code points
std::uint64_t count_utf8_bytes(std::string_view text);  // encoded byte length
std::uint64_t count_words(std::string_view text);       // whitespace-delimited tokens

// Sentences end at a run of '.', '!' or '?' that is followed by whitespace or
// the end of the text; the run itself belongs to no sentence. Only segments
// containing a non-whitespace code point count, which keeps
// num_sents <= num_words for any input.
std::uint64_t count_sentences(std::string_view text);

std::string md5_hex(std::string_view data);  // lowercase hex, 32 chars

DocumentMetrics compute_metrics(std::string_view text,
                                const LanguageClassifier& classifier);

Document annotate_metrics(Document doc, const LanguageClassifier& classifier);

}  // namespace corpuskit
