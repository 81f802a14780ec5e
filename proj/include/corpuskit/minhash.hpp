#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace corpuskit {

std::uint32_t fnv1a32(std::string_view bytes);
std::uint64_t fnv1a64(const void* data, std::size_t len);

// A document reduced to the set of 32-bit hashes of its overlapping
// character n-grams. Values are kept sorted and unique.
struct ShingleSet {
  std::vector<std::uint32_t> values;

  bool operator==(const ShingleSet&) const = default;
};

// Character windows count code points, hashing their UTF-8 bytes. Texts
// shorter than n characters (including the empty text) yield exactly one
// shingle: the hash of the whole text.
ShingleSet shingle(std::string_view text, unsigned n);

// |a n b| / |a u b|; 1.0 when both sets are empty (identical degenerates).
double jaccard(const ShingleSet& a, const ShingleSet& b);

struct LshParams {
  unsigned shingle_size = 10;
  unsigned num_hashes = 10;  // p; must equal bands * rows
  unsigned bands = 2;        // b
  double jaccard_threshold = 0.5;
  std::uint64_t master_seed = 0;

  unsigned rows_per_band() const { return bands == 0 ? 0 : num_hashes / bands; }

  // Throws std::invalid_argument unless num_hashes = bands * rows with at
  // least one row, shingle_size >= 1, and threshold in (0, 1].
  void validate() const;
};

struct MinHashFingerprint {
  std::string doc_id;
  std::vector<std::uint64_t> values;  // one minimum per hash function
};

// Smallest prime above 2^32; the multiply-add hash family works modulo this.
inline constexpr std::uint64_t kMinHashPrime = 4294967311ULL;

// Derives the p hash functions h_i(x) = (a_i * x + c_i) mod kMinHashPrime
// deterministically from master_seed. Identical seeds give identical
// fingerprints across runs, processes and shard decompositions.
class MinHasher {
 public:
  explicit MinHasher(const LshParams& params);

  // Position i holds min over shingles x of h_i(x). Throws
  // std::invalid_argument for an empty shingle set.
  std::vector<std::uint64_t> fingerprint(const ShingleSet& s) const;

 private:
  std::vector<std::uint64_t> a_;
  std::vector<std::uint64_t> c_;
};

// Unordered document pair, stored lexicographically ordered.
using IdPair = std::pair<std::string, std::string>;

// Banding: fingerprints are cut into b slices of r values; documents whose
// slice hashes collide in the same band become candidates. Output is sorted,
// unique, and free of self-pairs.
std::vector<IdPair> lsh_candidates(const std::vector<MinHashFingerprint>& fps,
                                   const LshParams& params);

// Keeps candidate pairs whose exact shingle-set Jaccard is >= threshold.
// Every candidate id must have a shingle set; otherwise std::invalid_argument.
std::vector<IdPair> verify_candidates(
    const std::vector<IdPair>& candidates,
    const std::unordered_map<std::string, ShingleSet>& shingles, double threshold);

}  // namespace corpuskit
