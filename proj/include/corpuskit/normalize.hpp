#pragma once

#include <string>
#include <string_view>

#include "corpuskit/document.hpp"

namespace corpuskit {

// Drops control (Cc) and format (Cf) code points, with three exceptions:
// '\n' and '\t' survive, and "\r\n" / lone '\r' become '\n'. Malformed UTF-8
// bytes come out as U+FFFD, so the result is always well-formed.
std::string remove_nonprinting(std::string_view text);

// Maps every White_Space code point except '\n' to a plain space, one for
// one. Runs are not collapsed and newlines keep document structure.
std::string normalize_whitespace(std::string_view text);

// Canonical composition (NFC).
std::string nfc_normalize(std::string_view text);

// The full chain in its fixed order: remove_nonprinting, then
// normalize_whitespace, then nfc_normalize. Idempotent.
std::string normalize_text(std::string_view text);

// Normalizes doc.text in place; documents that come out empty are marked
// removed at the normalize stage.
Document normalize_document(Document doc);

}  // namespace corpuskit
