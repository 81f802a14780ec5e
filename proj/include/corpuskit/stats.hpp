#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "corpuskit/document.hpp"
#include "json.hpp"

namespace corpuskit {

struct StageCounters {
  std::uint64_t docs_in = 0;
  std::uint64_t docs_out = 0;
  std::uint64_t bytes_in = 0;   // UTF-8 bytes of document text
  std::uint64_t bytes_out = 0;
};

// Stage keys in pipeline order, used to order the report.
inline constexpr std::array<std::string_view, 7> kStageOrder = {
    "normalize", "metrics", "filter", "dedup_exact",
    "segment",   "dedup_fuzzy", "merge"};

struct PipelineStats {
  std::map<std::string, StageCounters> per_stage;
  // Full document bytes attributed to every filter the document failed, so
  // the values may overlap and sum past the stage's removed bytes.
  std::map<std::string, std::uint64_t> per_filter_removed_bytes;
  std::map<std::uint64_t, std::uint64_t> group_size_histogram;
  // language -> stage -> counters; populated from the metrics stage onward
  // (language is unknown before that).
  std::map<std::string, std::map<std::string, StageCounters>> per_language;
  std::map<std::string, std::map<std::string, StageCounters>> per_category;
  // category -> language -> bytes surviving into the merged output.
  std::map<std::string, std::map<std::string, std::uint64_t>> final_bytes;
  // Odds and ends: parse_errors, unknown_category, md5_computed,
  // filter_default_subset_docs, ...
  std::map<std::string, std::uint64_t> counters;

  void record_in(std::string_view stage, const Document& doc);
  void record_out(std::string_view stage, const Document& doc);

  // Everything above plus derived percentages; fractions of the final byte
  // total per language and per category each sum to 100 (up to rounding).
  nlohmann::ordered_json to_json() const;
};

// Writes to_json() as a pretty-printed JSON document (atomically).
void emit_stats_report(const PipelineStats& stats, const std::filesystem::path& path);

}  // namespace corpuskit
