#pragma once

#include <cstdint>
#include <unordered_set>
#include <utility>
#include <vector>

#include "corpuskit/document.hpp"

namespace corpuskit {

// 128-bit digest parsed from the 32-char hex form, so the seen-set stores
// 16 bytes per document instead of a heap string.
struct Md5Digest {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  bool operator==(const Md5Digest&) const = default;
};

struct Md5DigestHash {
  std::size_t operator()(const Md5Digest& d) const noexcept {
    return d.hi ^ (d.lo * 0x9E3779B97F4A7C15ULL);
  }
};

// Throws std::invalid_argument unless hex is exactly 32 hex characters.
Md5Digest parse_md5(std::string_view hex);

struct ExactDedupStats {
  std::uint64_t kept = 0;
  std::uint64_t removed = 0;
  std::uint64_t md5_computed = 0;  // documents that arrived without a digest
};

// Streaming first-occurrence-wins deduplication. Feed documents in stable
// ingest order; the first carrier of each digest passes through, later ones
// come back marked removed at the dedup_exact stage.
class ExactDeduper {
 public:
  Document process(Document doc);
  const ExactDedupStats& stats() const { return stats_; }

 private:
  std::unordered_set<Md5Digest, Md5DigestHash> seen_;
  ExactDedupStats stats_;
};

// In-memory convenience wrapper: returns all documents (kept ones unchanged,
// duplicates marked) plus the removal count.
std::pair<std::vector<Document>, std::uint64_t> exact_dedup(
    std::vector<Document> docs);

}  // namespace corpuskit
