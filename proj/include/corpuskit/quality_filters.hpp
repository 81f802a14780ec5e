#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corpuskit/document.hpp"
#include "corpuskit/filter_config.hpp"

namespace corpuskit {

struct FilterVerdict {
  std::string filter_id;
  bool passed = true;
  // The statistic the filter computed, when it computes one: a ratio or a
  // count, as documented per filter below. Absent for the purely boolean
  // filters (blacklist_urls, supported_language) and for repetitive_bsp
  // when the document is below its n-gram gate.
  std::optional<double> measured;
};

// The thirteen repetition measurements. n-grams are word based (tokens are
// whitespace-delimited, compared exactly); lines split at '\n', paragraphs
// at "\n\n"; whitespace-only segments are structure, not content, and stay
// out of the censuses. "Duplicate fraction" is the fraction of occurrences
// whose content already appeared earlier. Character-fraction variants:
//   - duplicate line/paragraph: character mass of duplicate occurrences over
//     the mass of all occurrences;
//   - top n-gram: occurrences of the single most frequent n-gram (which must
//     occur at least twice) times its character mass, over the total
//     character count of the text. A token plus its joining spaces counts
//     len(tokens)+n-1 characters;
//   - duplicate n-gram: characters covered by at least one occurrence of a
//     repeated n-gram (positional union, overlaps counted once) over the
//     total character count of the text.
struct GopherMeasurements {
  double dup_line_fraction = 0.0;
  double dup_paragraph_fraction = 0.0;
  double dup_line_char_fraction = 0.0;
  double dup_paragraph_char_fraction = 0.0;
  std::array<double, 3> top_ngram_char_fraction{0.0, 0.0, 0.0};  // n = 2,3,4
  std::array<double, 6> dup_ngram_char_fraction{0.0, 0.0, 0.0,
                                                0.0, 0.0, 0.0};  // n = 5..10
};

GopherMeasurements gopher_measurements(std::string_view text);

// Word-level repetition ratios over 5-grams (or cfg.bsp_ngram_size):
// word ratio r_w = 1 - distinct/total n-grams; char ratio r_c = 1 - (chars
// of first occurrences / chars of all occurrences).
struct BspMeasurements {
  std::uint64_t total_ngrams = 0;
  double word_ratio = 0.0;
  double char_ratio = 0.0;
};

BspMeasurements bsp_measurements(std::string_view text, std::uint64_t ngram_size);

// Each filter takes (doc, cfg) and returns its verdict. Precondition for the
// metrics-dependent ones: doc.metrics is populated. All are total functions.
FilterVerdict f_alpha_present(const Document&, const FilterConfig&);      // measured: alphabetic-word ratio
FilterVerdict f_blacklist_urls(const Document&, const FilterConfig&);     // measured: none
FilterVerdict f_digit_fraction(const Document&, const FilterConfig&);     // measured: digit fraction
FilterVerdict f_document_length(const Document&, const FilterConfig&);    // measured: num_chars
FilterVerdict f_ellipsis_word_ratio(const Document&, const FilterConfig&);// measured: ellipses/words
FilterVerdict f_flagged_words(const Document&, const FilterConfig&);      // measured: total occurrences
FilterVerdict f_hashtag_word_ratio(const Document&, const FilterConfig&); // measured: hashtags/words
FilterVerdict f_initial_bullet(const Document&, const FilterConfig&);     // measured: bullet-line ratio
FilterVerdict f_mean_line_length(const Document&, const FilterConfig&);   // measured: MeanMed chars/line
FilterVerdict f_mean_word_length(const Document&, const FilterConfig&);   // measured: mean word length
FilterVerdict f_repetitive_bsp(const Document&, const FilterConfig&);     // measured: max(r_w, r_c)
FilterVerdict f_repetitive_gopher(const Document&, const FilterConfig&);  // measured: max measure/threshold
FilterVerdict f_stop_word(const Document&, const FilterConfig&);          // measured: stop-word ratio
FilterVerdict f_supported_language(const Document&, const FilterConfig&); // measured: none
FilterVerdict f_trailing_ellipsis(const Document&, const FilterConfig&);  // measured: ellipsis-line ratio

// Dispatch by filter id; throws std::invalid_argument for unknown ids.
FilterVerdict run_filter(std::string_view filter_id, const Document&,
                         const FilterConfig&);

struct FilterOutcome {
  Document doc;
  std::vector<FilterVerdict> verdicts;       // one per active filter, in order
  bool used_default_subset = false;          // no source/category mapping found
};

// Runs every filter active for the document's source/category (all of them,
// even after a failure), appends failed ids to filters_failed and marks the
// document removed at the filter stage when anything failed.
// Throws std::invalid_argument when metrics are missing.
FilterOutcome evaluate_document(Document doc, const FilterConfig& cfg);

}  // namespace corpuskit
