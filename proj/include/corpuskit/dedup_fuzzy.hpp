#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "corpuskit/document.hpp"
#include "corpuskit/minhash.hpp"

namespace corpuskit {

// Exact partition by metrics.lang, input order preserved within each
// language. Throws std::invalid_argument when metrics are missing.
std::map<std::string, std::vector<Document>> segment_by_language(
    std::vector<Document> docs);

struct DuplicateGroup {
  std::string survivor_id;              // lexicographically smallest member
  std::vector<std::string> member_ids;  // sorted ascending, size >= 2
  std::size_t size() const { return member_ids.size(); }
};

// Connected components of the verified-duplicate edge graph. Self-edges are
// ignored; singleton components produce no group. Groups come back sorted by
// survivor id.
std::vector<DuplicateGroup> build_groups(const std::vector<IdPair>& edges);

// Candidate generation + exact verification over one document collection:
// the edges of the near-duplicate graph. Exposed for the inter-shard path.
// Throws std::invalid_argument on duplicate document ids.
std::vector<IdPair> duplicate_edges(const std::vector<Document>& docs,
                                    const LshParams& params);

struct FuzzyShardResult {
  std::vector<Document> docs;  // all inputs; non-survivors marked removed
  std::vector<DuplicateGroup> groups;
  std::uint64_t removed = 0;
};

// Single-shard (single-language) near-duplicate removal: shingle, minhash,
// band, verify, group; every non-survivor gets removed_stage = dedup_fuzzy.
FuzzyShardResult fuzzy_dedup_shard(std::vector<Document> docs,
                                   const LshParams& params);

// ---- shard planning ----

struct ShardFile {
  std::filesystem::path path;
  std::uint64_t bytes = 0;
  std::string source;  // used to keep similar data together
};

enum class ShardMode { kIntra, kInter };

struct ShardDescriptor {
  std::vector<ShardFile> files;
  std::uint64_t bytes = 0;
};

struct ShardPlan {
  std::string language;
  ShardMode mode = ShardMode::kIntra;
  std::uint64_t max_shard_bytes = 0;
  std::vector<ShardDescriptor> shards;
};

struct ShardCaps {
  std::uint64_t intra_bytes = 80'000'000'000ULL;
  std::uint64_t inter_bytes = 40'000'000'000ULL;  // always half of intra
};

// Deterministic greedy first-fit over files sorted by (source, path). A
// language that fits the intra cap entirely gets one shard no matter the
// requested mode. Throws std::invalid_argument when the caps are inconsistent
// (inter must be half of intra) and std::runtime_error when a single file
// exceeds the applicable cap (split the file first).
ShardPlan plan_shards_for_language(const std::string& language,
                                   std::vector<ShardFile> files, ShardMode mode,
                                   const ShardCaps& caps);

// Per-language planning; languages missing from `modes` run intra.
std::map<std::string, ShardPlan> plan_shards(
    const std::map<std::string, std::vector<ShardFile>>& files_by_language,
    const std::map<std::string, ShardMode>& modes, const ShardCaps& caps);

// ---- inter-shard deduplication ----

struct InterShardResult {
  std::vector<std::string> removed_ids;  // sorted
  std::vector<DuplicateGroup> groups;
};

// Runs every one of the N(N-1)/2 shard pairs as an independent job over the
// pair's concatenated documents, unions the verified edges and groups them
// globally. With a fixed master_seed the result equals a single
// fuzzy_dedup_shard run over the concatenation of all shards. Jobs run
// concurrently (max_parallel_jobs 0 picks the hardware concurrency).
// Requires N >= 2.
InterShardResult inter_shard_dedup(const std::vector<std::vector<Document>>& shards,
                                   const LshParams& params,
                                   unsigned max_parallel_jobs = 0);

// Groups file records: {"survivor": id, "members": [ids...], "size": n}.
void write_groups(const std::vector<DuplicateGroup>& groups,
                  const std::filesystem::path& path);

}  // namespace corpuskit
