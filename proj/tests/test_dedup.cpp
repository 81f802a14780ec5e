#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "corpuskit/dedup_exact.hpp"
#include "corpuskit/dedup_fuzzy.hpp"
#include "corpuskit/minhash.hpp"
#include "corpuskit/union_find.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

using namespace corpuskit;
using testkit::make_doc;

TEST_CASE("fnv-1a reference vectors") {
  CHECK(fnv1a32("") == 0x811C9DC5u);
  CHECK(fnv1a32("a") == 0xE40C292Cu);
  CHECK(fnv1a32("foobar") == 0xBF9CF968u);
  const char a = 'a';
  CHECK(fnv1a64(&a, 1) == 0xAF63DC4C8601EC8CULL);
  CHECK(fnv1a64("foobar", 6) == 0x85944171F73967E8ULL);
}

TEST_CASE("shingling counts code points and dedups windows") {
  // Exactly one window when the text length equals n.
  ShingleSet s = shingle("abcdefghij", 10);
  REQUIRE(s.values.size() == 1);
  CHECK(s.values[0] == fnv1a32("abcdefghij"));

  // Twelve characters: three overlapping windows.
  s = shingle("abcdefghijkl", 10);
  CHECK(s.values.size() == 3);

  // Shorter than n (or empty): one shingle for the whole text.
  s = shingle("abc", 10);
  REQUIRE(s.values.size() == 1);
  CHECK(s.values[0] == fnv1a32("abc"));
  s = shingle("", 10);
  REQUIRE(s.values.size() == 1);
  CHECK(s.values[0] == fnv1a32(""));

  // All windows identical collapse to a single set element.
  s = shingle(std::string(40, 'x'), 10);
  CHECK(s.values.size() == 1);

  // Windows advance by code points, not bytes.
  std::string nordic;
  for (int i = 0; i < 12; ++i) nordic += "\xC3\xA5";  // 12 cps, 24 bytes
  s = shingle(nordic, 10);
  CHECK(s.values.size() == 1);  // 3 windows, all equal

  // Values come back sorted and unique.
  s = shingle("the quick brown fox jumps over the lazy dog", 10);
  CHECK(std::is_sorted(s.values.begin(), s.values.end()));
  CHECK(std::adjacent_find(s.values.begin(), s.values.end()) == s.values.end());
}

TEST_CASE("jaccard on shingle sets") {
  const ShingleSet a{{1, 2, 3}};
  const ShingleSet b{{2, 3, 4}};
  CHECK(jaccard(a, b) == doctest::Approx(0.5));
  CHECK(jaccard(a, a) == doctest::Approx(1.0));
  CHECK(jaccard(a, ShingleSet{{7, 8}}) == doctest::Approx(0.0));
  CHECK(jaccard(ShingleSet{}, ShingleSet{}) == doctest::Approx(1.0));
  CHECK(jaccard(a, ShingleSet{}) == doctest::Approx(0.0));
}

TEST_CASE("lsh parameter validation") {
  LshParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.rows_per_band() == 5);

  p.bands = 3;  // 10 is not a multiple of 3
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = LshParams{};
  p.shingle_size = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = LshParams{};
  p.jaccard_threshold = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.jaccard_threshold = 1.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("minhash fingerprints are a pinned function of the seed") {
  LshParams params;
  params.master_seed = 12345;
  const MinHasher hasher(params);
  const ShingleSet set = shingle("a reasonably long piece of text for hashing", 10);

  const auto fp = hasher.fingerprint(set);
  REQUIRE(fp.size() == params.num_hashes);
  for (const auto v : fp) CHECK(v < kMinHashPrime);

  // Same seed, fresh hasher: bit-identical.
  CHECK(MinHasher(params).fingerprint(set) == fp);
  LshParams other = params;
  other.master_seed = 54321;
  CHECK(MinHasher(other).fingerprint(set) != fp);

  // The family is h_i(x) = (a_i x + c_i) mod P with a_i, c_i drawn from
  // mt19937_64(master_seed) as a = r % (P-1) + 1 and c = r % P. Recompute
  // independently.
  std::mt19937_64 rng(params.master_seed);
  for (unsigned i = 0; i < params.num_hashes; ++i) {
    const std::uint64_t a = rng() % (kMinHashPrime - 1) + 1;
    const std::uint64_t c = rng() % kMinHashPrime;
    std::uint64_t best = ~std::uint64_t{0};
    for (const std::uint32_t x : set.values) {
      const auto h = static_cast<std::uint64_t>(
          (static_cast<unsigned __int128>(a) * x + c) % kMinHashPrime);
      best = std::min(best, h);
    }
    CHECK(fp[i] == best);
  }

  CHECK_THROWS_AS(hasher.fingerprint(ShingleSet{}), std::invalid_argument);
}

TEST_CASE("lsh banding pairs documents that agree on a whole band") {
  LshParams params;  // p=10, b=2, r=5

  std::vector<MinHashFingerprint> fps;
  fps.push_back({"a", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}});
  // Agrees with "a" on band 0 (values 0..4) only.
  fps.push_back({"b", {1, 2, 3, 4, 5, 90, 91, 92, 93, 94}});
  // Agrees with "a" on band 1 (values 5..9) only.
  fps.push_back({"c", {80, 81, 82, 83, 84, 6, 7, 8, 9, 10}});
  // Agreement across a band boundary pairs nothing.
  fps.push_back({"d", {70, 2, 3, 4, 5, 6, 71, 72, 73, 74}});
  // No agreement anywhere.
  fps.push_back({"e", {60, 61, 62, 63, 64, 65, 66, 67, 68, 69}});

  const std::vector<IdPair> expected = {{"a", "b"}, {"a", "c"}};
  CHECK(lsh_candidates(fps, params) == expected);

  // Identical fingerprints collide in every band but emerge once.
  fps.clear();
  fps.push_back({"x", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}});
  fps.push_back({"y", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}});
  CHECK(lsh_candidates(fps, params) == std::vector<IdPair>{{"x", "y"}});

  // Wrong fingerprint width is a programming error.
  fps.push_back({"z", {1, 2, 3}});
  CHECK_THROWS_AS(lsh_candidates(fps, params), std::invalid_argument);
}

TEST_CASE("candidate verification keeps pairs at or above the threshold") {
  std::unordered_map<std::string, ShingleSet> shingles;
  shingles["a"] = ShingleSet{{1, 2, 3}};
  shingles["b"] = ShingleSet{{2, 3, 4}};      // jaccard(a,b) = 0.5
  shingles["c"] = ShingleSet{{9, 10, 11}};    // jaccard(a,c) = 0
  shingles["d"] = ShingleSet{{1, 2, 3}};      // jaccard(a,d) = 1

  const std::vector<IdPair> candidates = {{"a", "b"}, {"a", "c"}, {"a", "d"}};
  const auto edges = verify_candidates(candidates, shingles, 0.5);
  CHECK(edges == std::vector<IdPair>{{"a", "b"}, {"a", "d"}});

  // 0.5 is inclusive; anything above it excludes the boundary pair.
  CHECK(verify_candidates(candidates, shingles, 0.51) ==
        std::vector<IdPair>{{"a", "d"}});

  CHECK_THROWS_AS(verify_candidates({{"a", "ghost"}}, shingles, 0.5),
                  std::invalid_argument);
}

TEST_CASE("md5 digest parsing") {
  const Md5Digest d = parse_md5("900150983cd24fb0d6963f7d28e17f72");
  CHECK(d.hi == 0x900150983cd24fb0ULL);
  CHECK(d.lo == 0xd6963f7d28e17f72ULL);
  CHECK(parse_md5("900150983CD24FB0D6963F7D28E17F72") == d);  // case-blind
  CHECK_THROWS_AS(parse_md5("short"), std::invalid_argument);
  CHECK_THROWS_AS(parse_md5("g00150983cd24fb0d6963f7d28e17f72"),
                  std::invalid_argument);
}

TEST_CASE("exact dedup keeps the first carrier of each digest") {
  ExactDeduper deduper;

  Document a = deduper.process(make_doc("a", "same text"));
  Document b = deduper.process(make_doc("b", "same text"));
  Document c = deduper.process(make_doc("c", "different text"));

  CHECK_FALSE(a.removed());
  CHECK(b.removed());
  CHECK(b.removed_stage == "dedup_exact");
  CHECK_FALSE(c.removed());
  CHECK(deduper.stats().kept == 2);
  CHECK(deduper.stats().removed == 1);
  CHECK(deduper.stats().md5_computed == 0);  // make_doc precomputes digests

  // Documents without a digest get one computed (and stored when possible).
  Document bare;
  bare.id = "bare";
  bare.text = "same text";
  bare.source = "s";
  bare.category = "Books";
  Document out = deduper.process(bare);
  CHECK(out.removed());  // same text as "a"
  CHECK(deduper.stats().md5_computed == 1);

  auto [docs, removed] = exact_dedup({make_doc("x", "t1"), make_doc("y", "t1"),
                                      make_doc("z", "t2")});
  CHECK(removed == 1);
  REQUIRE(docs.size() == 3);
  CHECK_FALSE(docs[0].removed());
  CHECK(docs[1].removed());
  CHECK_FALSE(docs[2].removed());
}

TEST_CASE("language segmentation is an exact partition") {
  std::vector<Document> docs;
  docs.push_back(make_doc("s1", "text ett", "sv"));
  docs.push_back(make_doc("s2", "text tva", "sv"));
  docs.push_back(make_doc("e1", "text one", "en"));

  auto by_lang = segment_by_language(docs);
  REQUIRE(by_lang.size() == 2);
  CHECK(by_lang.at("sv").size() == 2);
  CHECK(by_lang.at("en").size() == 1);
  CHECK(by_lang.at("sv")[0].id == "s1");  // input order preserved
  CHECK(by_lang.at("sv")[1].id == "s2");

  std::size_t total = 0;
  for (const auto& [lang, group] : by_lang) total += group.size();
  CHECK(total == docs.size());

  Document bare;
  bare.id = "bare";
  bare.text = "x";
  bare.source = "s";
  bare.category = "Books";
  CHECK_THROWS_AS(segment_by_language({bare}), std::invalid_argument);
}

TEST_CASE("build_groups merges connected components") {
  std::vector<IdPair> edges = {{"a", "b"}, {"b", "c"}};
  auto groups = build_groups(edges);
  REQUIRE(groups.size() == 1);
  CHECK(groups[0].survivor_id == "a");
  CHECK(groups[0].member_ids == std::vector<std::string>{"a", "b", "c"});
  CHECK(groups[0].size() == 3);

  // Two disjoint components, output ordered by survivor.
  edges = {{"m", "n"}, {"d", "e"}, {"e", "f"}, {"f", "d"}};
  groups = build_groups(edges);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].survivor_id == "d");
  CHECK(groups[0].member_ids == std::vector<std::string>{"d", "e", "f"});
  CHECK(groups[1].survivor_id == "m");

  CHECK(build_groups({}).empty());
  CHECK(build_groups({{"q", "q"}}).empty());  // self-edges carry nothing
}

TEST_CASE("duplicate_edges finds near-duplicate pairs") {
  LshParams params;
  params.master_seed = 99;

  const std::string base =
      "this is a fairly long base document whose shingles will overlap "
      "almost completely with its twin and not at all with the other one";
  std::vector<Document> docs;
  docs.push_back(make_doc("dup1", base));
  docs.push_back(make_doc("dup2", base));
  docs.push_back(make_doc("other",
                          "completely unrelated content made of different words "
                          "arranged in a different order entirely"));

  const auto edges = duplicate_edges(docs, params);
  CHECK(edges == std::vector<IdPair>{{"dup1", "dup2"}});

  docs.push_back(make_doc("dup1", base));  // repeated id
  CHECK_THROWS_AS(duplicate_edges(docs, params), std::invalid_argument);
}

TEST_CASE("fuzzy_dedup_shard marks non-survivors") {
  LshParams params;
  params.master_seed = 7;

  const std::string base =
      "a long enough passage of text that shingles into a rich set and "
      "therefore survives the minhash banding with its duplicate";
  std::vector<Document> docs;
  docs.push_back(make_doc("b_doc", base));
  docs.push_back(make_doc("a_doc", base));
  docs.push_back(make_doc("c_doc",
                          "some other totally distinct writing about nothing in "
                          "particular that overlaps with neither of the others"));

  FuzzyShardResult result = fuzzy_dedup_shard(docs, params);
  REQUIRE(result.docs.size() == 3);
  REQUIRE(result.groups.size() == 1);
  CHECK(result.groups[0].survivor_id == "a_doc");  // smallest id survives
  CHECK(result.groups[0].member_ids == std::vector<std::string>{"a_doc", "b_doc"});
  CHECK(result.removed == 1);

  for (const auto& doc : result.docs) {
    if (doc.id == "b_doc") {
      CHECK(doc.removed());
      CHECK(doc.removed_stage == "dedup_fuzzy");
    } else {
      CHECK_FALSE(doc.removed());
    }
  }

  // Same seed, same outcome.
  FuzzyShardResult again = fuzzy_dedup_shard(docs, params);
  CHECK(again.removed == result.removed);
  REQUIRE(again.groups.size() == 1);
  CHECK(again.groups[0].member_ids == result.groups[0].member_ids);
}

TEST_CASE("shard caps must be consistent") {
  ShardCaps caps;
  CHECK(caps.intra_bytes == 80'000'000'000ULL);
  CHECK(caps.inter_bytes == 40'000'000'000ULL);

  ShardCaps bad{80, 50};
  CHECK_THROWS_AS(
      plan_shards_for_language("sv", {{"f", 10, "s"}}, ShardMode::kIntra, bad),
      std::invalid_argument);
}

TEST_CASE("shard planning: fits-entirely languages get one shard") {
  const ShardCaps caps{80, 40};
  std::vector<ShardFile> files = {{"a.jsonl", 19, "src"}};
  ShardPlan plan =
      plan_shards_for_language("is", files, ShardMode::kInter, caps);
  REQUIRE(plan.shards.size() == 1);
  CHECK(plan.shards[0].bytes == 19);
  CHECK(plan.language == "is");

  // Total 60 <= 80: still a single shard even in inter mode.
  files = {{"a.jsonl", 30, "s1"}, {"b.jsonl", 30, "s2"}};
  plan = plan_shards_for_language("da", files, ShardMode::kInter, caps);
  CHECK(plan.shards.size() == 1);
}

TEST_CASE("shard planning: first fit under the applicable cap") {
  const ShardCaps caps{80, 40};

  // Thirteen 10-byte files, inter cap 40: shards of four files each.
  std::vector<ShardFile> files;
  for (int i = 0; i < 13; ++i)
    files.push_back({"f" + std::to_string(i) + ".jsonl", 10, "src"});
  ShardPlan plan = plan_shards_for_language("sv", files, ShardMode::kInter, caps);
  REQUIRE(plan.shards.size() == 4);
  CHECK(plan.max_shard_bytes == 40);
  CHECK(plan.mode == ShardMode::kInter);
  std::uint64_t total = 0;
  std::size_t file_count = 0;
  for (const auto& s : plan.shards) {
    CHECK(s.bytes <= 40);
    total += s.bytes;
    file_count += s.files.size();
  }
  CHECK(total == 130);
  CHECK(file_count == 13);

  // Same files in intra mode use the 80-byte cap: two shards.
  plan = plan_shards_for_language("sv", files, ShardMode::kIntra, caps);
  REQUIRE(plan.shards.size() == 2);
  CHECK(plan.max_shard_bytes == 80);

  // Files are laid out in (source, path) order before the first-fit pass.
  files = {{"z.jsonl", 50, "beta"}, {"a.jsonl", 50, "alpha"}, {"m.jsonl", 20, "alpha"}};
  plan = plan_shards_for_language("no", files, ShardMode::kIntra, caps);
  REQUIRE(plan.shards.size() == 2);
  CHECK(plan.shards[0].files[0].path == "a.jsonl");
  CHECK(plan.shards[0].files[1].path == "m.jsonl");
  CHECK(plan.shards[1].files[0].path == "z.jsonl");

  // One file bigger than the cap cannot be planned.
  files = {{"huge.jsonl", 100, "src"}};
  CHECK_THROWS_AS(plan_shards_for_language("en", files, ShardMode::kIntra, caps),
                  std::runtime_error);
}

TEST_CASE("plan_shards covers every language, defaulting to intra") {
  const ShardCaps caps{80, 40};
  std::map<std::string, std::vector<ShardFile>> by_lang;
  for (int i = 0; i < 13; ++i)
    by_lang["sv"].push_back({"f" + std::to_string(i) + ".jsonl", 10, "s"});
  by_lang["is"] = {{"i.jsonl", 5, "s"}};

  std::map<std::string, ShardMode> modes;
  modes["sv"] = ShardMode::kInter;
  const auto plans = plan_shards(by_lang, modes, caps);
  REQUIRE(plans.size() == 2);
  CHECK(plans.at("sv").shards.size() == 4);
  CHECK(plans.at("is").shards.size() == 1);
  CHECK(plans.at("is").mode == ShardMode::kIntra);
}

TEST_CASE("inter-shard dedup unions edges found by pair jobs") {
  LshParams params;
  params.master_seed = 31337;

  const std::string dup_text =
      "the very same duplicated passage that appears in all three shards of "
      "this tiny corpus and nowhere else at all";
  auto filler = [](const std::string& id, int salt) {
    static const char* texts[] = {
        "quiet rivers bend around mossy stones while herons wade patiently",
        "the workshop smells of cedar shavings and fresh varnish every morning",
        "distant trains rattle through the valley long after midnight passes"};
    return make_doc(id, texts[salt - 1]);
  };

  std::vector<std::vector<Document>> shards(3);
  shards[0].push_back(make_doc("s0_dup", dup_text));
  shards[0].push_back(filler("s0_fill", 1));
  shards[1].push_back(make_doc("s1_dup", dup_text));
  shards[1].push_back(filler("s1_fill", 2));
  shards[2].push_back(make_doc("s2_dup", dup_text));
  shards[2].push_back(filler("s2_fill", 3));

  const InterShardResult result = inter_shard_dedup(shards, params, 2);
  REQUIRE(result.groups.size() == 1);
  CHECK(result.groups[0].survivor_id == "s0_dup");
  CHECK(result.groups[0].member_ids ==
        std::vector<std::string>{"s0_dup", "s1_dup", "s2_dup"});
  CHECK(result.removed_ids == std::vector<std::string>{"s1_dup", "s2_dup"});
  CHECK(std::is_sorted(result.removed_ids.begin(), result.removed_ids.end()));

  CHECK_THROWS_AS(inter_shard_dedup({shards[0]}, params), std::invalid_argument);
}

TEST_CASE("write_groups emits one json record per group") {
  testkit::ScratchDir tmp;
  const auto path = tmp.path() / "groups.jsonl";

  std::vector<DuplicateGroup> groups;
  groups.push_back({"a", {"a", "b", "c"}});
  groups.push_back({"x", {"x", "y"}});
  write_groups(groups, path);

  std::ifstream in(path);
  std::string line;
  REQUIRE(std::getline(in, line));
  auto j = nlohmann::json::parse(line);
  CHECK(j["survivor"] == "a");
  CHECK(j["members"].size() == 3);
  CHECK(j["size"] == 3);
  REQUIRE(std::getline(in, line));
  j = nlohmann::json::parse(line);
  CHECK(j["survivor"] == "x");
  CHECK(j["size"] == 2);
  CHECK_FALSE(std::getline(in, line));
}

TEST_CASE("union-find merges and reports components") {
  UnionFind uf(5);
  CHECK(uf.unite(0, 1));
  CHECK(uf.unite(1, 2));
  CHECK_FALSE(uf.unite(0, 2));  // already together
  CHECK(uf.find(0) == uf.find(2));
  CHECK(uf.find(3) != uf.find(0));
  CHECK(uf.size() == 5);
}
