#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "corpuskit/document.hpp"

namespace corpuskit {

// The fifteen quality filters, in canonical order.
inline constexpr std::array<std::string_view, 15> kFilterIds = {
    "alpha_present",      "blacklist_urls",   "digit_fraction",
    "document_length",    "ellipsis_word_ratio", "flagged_words",
    "hashtag_word_ratio", "initial_bullet",   "mean_line_length",
    "mean_word_length",   "repetitive_bsp",   "repetitive_gopher",
    "stop_word",          "supported_language", "trailing_ellipsis"};

bool is_filter_id(std::string_view id);

// Thresholds for the thirteen repetition measurements. A document passes
// only while every measurement stays strictly below its threshold.
struct GopherThresholds {
  double dup_line_fraction = 0.35;
  double dup_paragraph_fraction = 0.35;
  double dup_line_char_fraction = 0.20;
  double dup_paragraph_char_fraction = 0.20;
  std::array<double, 3> top_ngram_char_fraction{0.25, 0.23, 0.21};       // n = 2,3,4
  std::array<double, 6> dup_ngram_char_fraction{0.20, 0.19, 0.18,
                                                0.17, 0.16, 0.15};       // n = 5..10
};

struct FilterParams {
  double alpha_min_word_ratio = 0.8;        // pass: ratio >= threshold
  double digit_max_fraction = 0.2;          // pass: fraction < threshold
  std::uint64_t min_document_chars = 50;    // pass: num_chars > threshold
  double ellipsis_max_word_ratio = 0.1;     // pass: ratio < threshold
  std::uint64_t flagged_max_total = 4;      // pass: total < threshold
  std::uint64_t flagged_max_unique = 3;     // pass: unique < threshold
  double flagged_max_weight_per_word = 0.01;  // pass: weight sum < words * this
  double hashtag_max_word_ratio = 0.1;      // pass: ratio < threshold
  double bullet_max_line_ratio = 0.9;       // pass: ratio < threshold OR count below
  std::uint64_t bullet_min_lines = 3;
  double line_min_meanmed_chars = 9.0;      // pass: MeanMed > threshold
  double line_min_meanmed_words = 2.1;      // pass: MeanMed >= threshold
  double word_length_min = 2.0;             // pass: mean within [min, max]
  double word_length_max = 10.0;
  double bsp_max_word_ratio = 0.30;         // pass: both ratios < threshold
  double bsp_max_char_ratio = 0.30;
  std::uint64_t bsp_min_ngrams = 10;        // gate: fewer 5-grams always passes
  std::uint64_t bsp_ngram_size = 5;
  GopherThresholds gopher;
  std::uint64_t stop_word_min_count = 2;    // pass: count >= this AND ratio >= min
  double stop_word_min_ratio = 0.1;
  double trailing_max_line_ratio = 0.3;     // pass: ratio < threshold OR count below
  std::uint64_t trailing_min_lines = 3;
};

// Canonical lookup key for a source name: lowercased, with runs of
// non-alphanumeric characters collapsed to single underscores.
std::string normalize_subset_key(std::string_view name);

// Which filters run for which documents, plus every tunable the filters
// read. Immutable after construction; safe to share across threads.
struct FilterConfig {
  // Named filter subsets; each is a sorted list of filter ids.
  std::map<std::string, std::vector<std::string>> subsets;
  // Exact category name -> subset name.
  std::map<std::string, std::string> category_subset;
  // normalize_subset_key(source) -> subset name.
  std::map<std::string, std::string> source_subset;
  // Used when neither source nor category has a mapping.
  std::string default_subset = "web_cc";

  FilterParams params;

  std::map<std::string, std::unordered_set<std::string>> stopwords;
  std::map<std::string, std::unordered_map<std::string, double>> flagged_words;
  std::unordered_set<std::string> blacklist_domains;    // lowercase hostnames
  std::unordered_set<std::string> blacklist_extensions; // lowercase, with dot
  std::unordered_set<std::string> blacklist_urls;       // exact full URLs
  std::vector<std::string> bullet_prefixes{"-", "*", "•", "·"};

  // Derived by finalize(): fallbacks used when a language has no own list.
  std::unordered_set<std::string> stopword_union;
  std::unordered_map<std::string, double> flagged_union;  // max weight on clash

  // The activation matrix and its source/category exceptions, word lists empty.
  static FilterConfig builtin_defaults();

  // builtin_defaults overlaid with a JSON config file. Word-list paths in the
  // file resolve relative to the file's directory. Throws on malformed input.
  static FilterConfig load(const std::filesystem::path& file);

  // Validates filter ids, subset references and weights; rebuilds the union
  // lists. Must be called after any manual mutation of the fields above.
  void finalize();

  // Active filter list for this document. Source mapping wins over category;
  // *fell_back reports use of default_subset.
  const std::vector<std::string>& subset_for(const Document& doc,
                                             bool* fell_back = nullptr) const;

  // nullptr when the language has no list of its own (callers then use the
  // union fallback).
  const std::unordered_set<std::string>* stopwords_for(const std::string& lang) const;
  const std::unordered_map<std::string, double>* flagged_for(const std::string& lang) const;
};

}  // namespace corpuskit
