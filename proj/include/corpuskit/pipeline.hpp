#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "corpuskit/dedup_fuzzy.hpp"
#include "corpuskit/filter_config.hpp"
#include "corpuskit/minhash.hpp"
#include "corpuskit/stats.hpp"

namespace corpuskit {

struct PipelineOptions {
  // Empty: the built-in activation matrix with empty word lists.
  std::filesystem::path filter_config_file;
  // "baseline" or "external:<base_url>".
  std::string langid_spec = "baseline";
  // Fallback stop-word directory for the baseline classifier, used when the
  // filter config ships no stop-word lists.
  std::filesystem::path stopwords_dir;
  LshParams lsh;  // master_seed is overridden by run_pipeline's seed argument
  ShardCaps caps;
  std::map<std::string, ShardMode> language_modes;  // unlisted languages: intra
  bool strict_parse = false;
  unsigned max_parallel_jobs = 0;  // 0: hardware concurrency
};

// JSON run config; relative paths resolve against the config file location.
// Recognized fields: filter_config, langid, stopwords_dir, lsh {shingle_size,
// num_hashes, bands, jaccard_threshold}, shard_caps {intra_bytes,
// inter_bytes}, language_modes {lang: "intra"|"inter"}, strict_parse,
// max_parallel_jobs.
PipelineOptions load_run_config(const std::filesystem::path& file);

// Stage output directories created under the output root. Each holds the
// surviving documents in docs/ plus removed.jsonl where the stage removes
// anything; the fuzzy stage adds groups.jsonl.
inline constexpr std::array<std::string_view, 7> kStageDirs = {
    "01_normalize", "02_metrics",     "03_filter", "04_dedup_exact",
    "05_segment",   "06_dedup_fuzzy", "07_merge"};

// Runs all seven stages over `input` (a .jsonl file or a directory of them),
// persisting every intermediate stage under out_dir so stages can be
// re-inspected or re-run. Returns the populated statistics. The stats report
// itself is written by emit_stats_report; nothing here embeds timestamps, so
// identical input + options + seed gives byte-identical trees.
PipelineStats run_pipeline(const PipelineOptions& opt,
                           const std::filesystem::path& input,
                           const std::filesystem::path& out_dir,
                           std::uint64_t seed);

}  // namespace corpuskit
