#include "corpuskit/minhash.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "corpuskit/unicode.hpp"

namespace corpuskit {

std::uint32_t fnv1a32(std::string_view bytes) {
  std::uint32_t hash = 0x811C9DC5u;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x01000193u;
  }
  return hash;
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

ShingleSet shingle(std::string_view text, unsigned n) {
  ShingleSet set;

  // Byte offsets of every code point boundary, ending with text.size().
  std::vector<std::size_t> bounds;
  std::size_t pos = 0;
  bounds.push_back(0);
  while (pos < text.size()) {
    uni::next_codepoint(text, pos);
    bounds.push_back(pos);
  }
  const std::size_t cp_count = bounds.size() - 1;

  if (n == 0 || cp_count < n) {
    set.values.push_back(fnv1a32(text));
    return set;
  }

  set.values.reserve(cp_count - n + 1);
  for (std::size_t i = 0; i + n <= cp_count; ++i)
    set.values.push_back(
        fnv1a32(text.substr(bounds[i], bounds[i + n] - bounds[i])));

  std::sort(set.values.begin(), set.values.end());
  set.values.erase(std::unique(set.values.begin(), set.values.end()),
                   set.values.end());
  return set;
}

double jaccard(const ShingleSet& a, const ShingleSet& b) {
  if (a.values.empty() && b.values.empty()) return 1.0;
  std::size_t i = 0, j = 0, common = 0;
  while (i < a.values.size() && j < b.values.size()) {
    if (a.values[i] == b.values[j]) {
      ++common;
      ++i;
      ++j;
    } else if (a.values[i] < b.values[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::size_t unions = a.values.size() + b.values.size() - common;
  return static_cast<double>(common) / static_cast<double>(unions);
}

void LshParams::validate() const {
  if (shingle_size == 0)
    throw std::invalid_argument("shingle_size must be >= 1");
  if (bands == 0 || num_hashes == 0 || num_hashes % bands != 0)
    throw std::invalid_argument("num_hashes must be a positive multiple of bands");
  if (!(jaccard_threshold > 0.0) || jaccard_threshold > 1.0)
    throw std::invalid_argument("jaccard_threshold must be in (0, 1]");
}

MinHasher::MinHasher(const LshParams& params) {
  params.validate();
  std::mt19937_64 rng(params.master_seed);
  a_.reserve(params.num_hashes);
  c_.reserve(params.num_hashes);
  for (unsigned i = 0; i < params.num_hashes; ++i) {
    a_.push_back(rng() % (kMinHashPrime - 1) + 1);  // in [1, P-1]
    c_.push_back(rng() % kMinHashPrime);            // in [0, P-1]
  }
}

std::vector<std::uint64_t> MinHasher::fingerprint(const ShingleSet& s) const {
  if (s.values.empty())
    throw std::invalid_argument("cannot fingerprint an empty shingle set");
  std::vector<std::uint64_t> fp(a_.size(), ~std::uint64_t{0});
  for (std::size_t i = 0; i < a_.size(); ++i) {
    const unsigned __int128 a = a_[i];
    const std::uint64_t c = c_[i];
    std::uint64_t best = ~std::uint64_t{0};
    for (const std::uint32_t x : s.values) {
      const auto h = static_cast<std::uint64_t>((a * x + c) % kMinHashPrime);
      if (h < best) best = h;
    }
    fp[i] = best;
  }
  return fp;
}

std::vector<IdPair> lsh_candidates(const std::vector<MinHashFingerprint>& fps,
                                   const LshParams& params) {
  params.validate();
  const unsigned r = params.rows_per_band();
  for (const auto& fp : fps)
    if (fp.values.size() != params.num_hashes)
      throw std::invalid_argument("fingerprint length mismatch for " + fp.doc_id);

  std::vector<IdPair> pairs;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
  for (unsigned band = 0; band < params.bands; ++band) {
    buckets.clear();
    for (std::size_t i = 0; i < fps.size(); ++i) {
      const std::uint64_t key =
          fnv1a64(fps[i].values.data() + static_cast<std::size_t>(band) * r,
                  sizeof(std::uint64_t) * r);
      buckets[key].push_back(i);
    }
    for (const auto& [key, members] : buckets) {
      for (std::size_t x = 0; x + 1 < members.size(); ++x)
        for (std::size_t y = x + 1; y < members.size(); ++y) {
          const std::string& a = fps[members[x]].doc_id;
          const std::string& b = fps[members[y]].doc_id;
          if (a == b) continue;
          pairs.emplace_back(std::min(a, b), std::max(a, b));
        }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

std::vector<IdPair> verify_candidates(
    const std::vector<IdPair>& candidates,
    const std::unordered_map<std::string, ShingleSet>& shingles, double threshold) {
  auto set_of = [&](const std::string& id) -> const ShingleSet& {
    const auto it = shingles.find(id);
    if (it == shingles.end())
      throw std::invalid_argument("no shingle set for candidate " + id);
    return it->second;
  };

  std::vector<IdPair> edges;
  for (const auto& [a, b] : candidates)
    if (jaccard(set_of(a), set_of(b)) >= threshold) edges.emplace_back(a, b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace corpuskit
