#include "corpuskit/dedup_fuzzy.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "corpuskit/union_find.hpp"
#include "json.hpp"

namespace corpuskit {

std::map<std::string, std::vector<Document>> segment_by_language(
    std::vector<Document> docs) {
  std::map<std::string, std::vector<Document>> by_lang;
  for (auto& doc : docs) {
    if (!doc.metrics)
      throw std::invalid_argument("segment_by_language needs metrics, document " +
                                  doc.id);
    by_lang[doc.metrics->lang].push_back(std::move(doc));
  }
  return by_lang;
}

std::vector<DuplicateGroup> build_groups(const std::vector<IdPair>& edges) {
  // Index every endpoint; sorting keeps the index assignment deterministic.
  std::vector<std::string> ids;
  for (const auto& [a, b] : edges) {
    if (a == b) continue;
    ids.push_back(a);
    ids.push_back(b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);

  UnionFind uf(ids.size());
  for (const auto& [a, b] : edges)
    if (a != b) uf.unite(index.at(a), index.at(b));

  std::unordered_map<std::size_t, std::vector<std::string>> components;
  for (std::size_t i = 0; i < ids.size(); ++i)
    components[uf.find(i)].push_back(ids[i]);

  std::vector<DuplicateGroup> groups;
  for (auto& [root, members] : components) {
    if (members.size() < 2) continue;  // cannot happen for edge endpoints
    std::sort(members.begin(), members.end());
    DuplicateGroup g;
    g.survivor_id = members.front();
    g.member_ids = std::move(members);
    groups.push_back(std::move(g));
  }
  std::sort(groups.begin(), groups.end(), [](const auto& x, const auto& y) {
    return x.survivor_id < y.survivor_id;
  });
  return groups;
}

std::vector<IdPair> duplicate_edges(const std::vector<Document>& docs,
                                    const LshParams& params) {
  params.validate();
  const MinHasher hasher(params);

  std::unordered_map<std::string, ShingleSet> shingles;
  shingles.reserve(docs.size());
  std::vector<MinHashFingerprint> fps;
  fps.reserve(docs.size());
  for (const auto& doc : docs) {
    auto [it, inserted] = shingles.emplace(doc.id, shingle(doc.text, params.shingle_size));
    if (!inserted)
      throw std::invalid_argument("duplicate document id in dedup input: " + doc.id);
    fps.push_back({doc.id, hasher.fingerprint(it->second)});
  }

  const auto candidates = lsh_candidates(fps, params);
  return verify_candidates(candidates, shingles, params.jaccard_threshold);
}

FuzzyShardResult fuzzy_dedup_shard(std::vector<Document> docs,
                                   const LshParams& params) {
  FuzzyShardResult result;
  result.groups = build_groups(duplicate_edges(docs, params));

  std::unordered_set<std::string_view> losers;
  for (const auto& g : result.groups)
    for (std::size_t i = 1; i < g.member_ids.size(); ++i)
      losers.insert(g.member_ids[i]);

  for (auto& doc : docs)
    if (losers.count(doc.id)) {
      doc.removed_stage = std::string(stage::kDedupFuzzy);
      ++result.removed;
    }
  result.docs = std::move(docs);
  return result;
}

ShardPlan plan_shards_for_language(const std::string& language,
                                   std::vector<ShardFile> files, ShardMode mode,
                                   const ShardCaps& caps) {
  if (caps.intra_bytes == 0 || caps.inter_bytes * 2 != caps.intra_bytes)
    throw std::invalid_argument(
        "shard caps inconsistent: inter cap must be half of the intra cap");

  std::uint64_t total = 0;
  for (const auto& f : files) total += f.bytes;

  ShardPlan plan;
  plan.language = language;

  // A language that fits in memory whole needs no pairwise machinery.
  if (total <= caps.intra_bytes) mode = ShardMode::kIntra;
  plan.mode = mode;
  plan.max_shard_bytes =
      mode == ShardMode::kIntra ? caps.intra_bytes : caps.inter_bytes;

  std::sort(files.begin(), files.end(), [](const ShardFile& a, const ShardFile& b) {
    return std::tie(a.source, a.path) < std::tie(b.source, b.path);
  });

  ShardDescriptor current;
  for (auto& f : files) {
    if (f.bytes > plan.max_shard_bytes)
      throw std::runtime_error("file " + f.path.string() + " (" +
                               std::to_string(f.bytes) +
                               " bytes) exceeds the shard cap of " +
                               std::to_string(plan.max_shard_bytes) +
                               " bytes; split the file first");
    if (!current.files.empty() && current.bytes + f.bytes > plan.max_shard_bytes) {
      plan.shards.push_back(std::move(current));
      current = {};
    }
    current.bytes += f.bytes;
    current.files.push_back(std::move(f));
  }
  if (!current.files.empty()) plan.shards.push_back(std::move(current));
  return plan;
}

std::map<std::string, ShardPlan> plan_shards(
    const std::map<std::string, std::vector<ShardFile>>& files_by_language,
    const std::map<std::string, ShardMode>& modes, const ShardCaps& caps) {
  std::map<std::string, ShardPlan> plans;
  for (const auto& [lang, files] : files_by_language) {
    const auto it = modes.find(lang);
    const ShardMode mode = it == modes.end() ? ShardMode::kIntra : it->second;
    plans[lang] = plan_shards_for_language(lang, files, mode, caps);
  }
  return plans;
}

InterShardResult inter_shard_dedup(const std::vector<std::vector<Document>>& shards,
                                   const LshParams& params,
                                   unsigned max_parallel_jobs) {
  if (shards.size() < 2)
    throw std::invalid_argument("inter-shard dedup needs at least 2 shards");
  params.validate();

  // One job per shard pair, each over the pair's concatenated documents.
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t i = 0; i < shards.size(); ++i)
    for (std::size_t j = i + 1; j < shards.size(); ++j) jobs.emplace_back(i, j);

  auto run_job = [&](std::size_t i, std::size_t j) {
    std::vector<Document> both;
    both.reserve(shards[i].size() + shards[j].size());
    both.insert(both.end(), shards[i].begin(), shards[i].end());
    both.insert(both.end(), shards[j].begin(), shards[j].end());
    return duplicate_edges(both, params);
  };

  unsigned parallel = max_parallel_jobs;
  if (parallel == 0) parallel = std::max(1u, std::thread::hardware_concurrency());

  std::vector<IdPair> edges;
  for (std::size_t begin = 0; begin < jobs.size(); begin += parallel) {
    const std::size_t end = std::min(jobs.size(), begin + parallel);
    std::vector<std::future<std::vector<IdPair>>> batch;
    for (std::size_t k = begin; k < end; ++k)
      batch.push_back(std::async(std::launch::async, run_job, jobs[k].first,
                                 jobs[k].second));
    for (auto& fut : batch) {
      auto job_edges = fut.get();
      edges.insert(edges.end(), job_edges.begin(), job_edges.end());
    }
  }

  // The edge set, not job order, determines the outcome.
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  InterShardResult result;
  result.groups = build_groups(edges);
  for (const auto& g : result.groups)
    for (std::size_t i = 1; i < g.member_ids.size(); ++i)
      result.removed_ids.push_back(g.member_ids[i]);
  std::sort(result.removed_ids.begin(), result.removed_ids.end());
  return result;
}

void write_groups(const std::vector<DuplicateGroup>& groups,
                  const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out.is_open())
      throw std::runtime_error("cannot open for writing: " + tmp.string());
    for (const auto& g : groups) {
      nlohmann::ordered_json j;
      j["survivor"] = g.survivor_id;
      j["members"] = g.member_ids;
      j["size"] = g.size();
      out << j.dump() << '\n';
    }
    out.flush();
    if (!out.good()) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace corpuskit
