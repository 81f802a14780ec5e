#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace corpuskit {

// Maximal runs of non-whitespace code points (Unicode White_Space splits).
// Views point into `text`.
std::vector<std::string_view> tokens(std::string_view text);

// Canonical form used for word-list lookups: leading and trailing
// non-alphanumeric code points stripped, then lowercased. May be empty
// (e.g. for a token that is pure punctuation).
std::string word_key(std::string_view token);

// Split at every '\n'. A trailing newline does not produce an extra segment.
std::vector<std::string_view> split_lines(std::string_view text);

// Split at non-overlapping occurrences of "\n\n", scanning left to right.
std::vector<std::string_view> split_paragraphs(std::string_view text);

bool has_nonspace(std::string_view s);

}  // namespace corpuskit
