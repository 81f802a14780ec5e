#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace corpuskit {

// The nine corpus categories. Anything else maps to "Miscellaneous" on read.
inline constexpr std::array<std::string_view, 9> kCategories = {
    "Articles",      "Books",       "Code",        "Conversational", "Math",
    "Miscellaneous", "Web CC",      "Web Sources", "Wikipedia"};

bool is_known_category(std::string_view category);

// Stage labels recorded in meta.removed_stage when a document is dropped.
namespace stage {
inline constexpr std::string_view kNormalize = "normalize";
inline constexpr std::string_view kFilter = "filter";
inline constexpr std::string_view kDedupExact = "dedup_exact";
inline constexpr std::string_view kDedupFuzzy = "dedup_fuzzy";
}  // namespace stage

struct DocumentMetrics {
  std::string lang;  // ISO 639-1 code, or "und" when unidentifiable
  std::uint64_t num_chars = 0;      // Unicode code points
  std::uint64_t num_utf8bytes = 0;  // UTF-8 encoded length
  std::uint64_t num_words = 0;      // whitespace-delimited tokens
  std::uint64_t num_sents = 0;      // sentence count, never above num_words
  std::string md5;                  // lowercase hex digest of the text

  bool operator==(const DocumentMetrics&) const = default;
};

struct Document {
  std::string id;
  std::string text;
  std::string source;    // corpus the document came from
  std::string category;  // one of kCategories
  std::optional<std::string> url;
  std::optional<DocumentMetrics> metrics;
  std::vector<std::string> filters_failed;  // quality filter ids, in filter order
  std::optional<std::string> removed_stage;

  bool removed() const { return removed_stage.has_value(); }

  bool operator==(const Document&) const = default;
};

inline bool is_known_category(std::string_view category) {
  for (auto c : kCategories)
    if (c == category) return true;
  return false;
}

}  // namespace corpuskit
