#include "corpuskit/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <unordered_set>

#include "corpuskit/dedup_exact.hpp"
#include "corpuskit/jsonl.hpp"
#include "corpuskit/langid.hpp"
#include "corpuskit/metrics.hpp"
#include "corpuskit/normalize.hpp"
#include "corpuskit/quality_filters.hpp"
#include "json.hpp"

namespace corpuskit {

namespace fs = std::filesystem;

namespace {

fs::path resolve(const fs::path& base, const std::string& rel) {
  const fs::path p(rel);
  return p.is_absolute() ? p : base / p;
}

std::vector<fs::path> input_files(const fs::path& input) {
  if (fs::is_directory(input)) {
    auto files = list_jsonl_files(input);
    if (files.empty())
      return {};
    return files;
  }
  if (fs::is_regular_file(input)) return {input};
  throw std::runtime_error("input not found: " + input.string());
}

std::vector<fs::path> subdirectories(const fs::path& dir) {
  std::vector<fs::path> dirs;
  if (!fs::exists(dir)) return dirs;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_directory()) dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

std::unique_ptr<LanguageClassifier> build_classifier(const PipelineOptions& opt,
                                                     const FilterConfig& fcfg) {
  if (opt.langid_spec == "baseline") {
    if (!fcfg.stopwords.empty())
      return std::make_unique<StopwordClassifier>(fcfg.stopwords);
    if (!opt.stopwords_dir.empty())
      return std::make_unique<StopwordClassifier>(
          StopwordClassifier::from_dir(opt.stopwords_dir));
    throw std::runtime_error(
        "baseline language identification needs stop-word lists: configure "
        "them in the filter config or set stopwords_dir");
  }
  return make_classifier(opt.langid_spec, {});
}

}  // namespace

PipelineOptions load_run_config(const fs::path& file) {
  std::ifstream in(file);
  if (!in.is_open())
    throw std::runtime_error("cannot open run config: " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("malformed run config " + file.string() + ": " +
                             e.what());
  }

  PipelineOptions opt;
  const fs::path base = file.parent_path();

  if (j.contains("filter_config"))
    opt.filter_config_file = resolve(base, j["filter_config"].get<std::string>());
  if (j.contains("langid")) opt.langid_spec = j["langid"].get<std::string>();
  if (j.contains("stopwords_dir"))
    opt.stopwords_dir = resolve(base, j["stopwords_dir"].get<std::string>());

  if (j.contains("lsh")) {
    const auto& l = j["lsh"];
    opt.lsh.shingle_size = l.value("shingle_size", opt.lsh.shingle_size);
    opt.lsh.num_hashes = l.value("num_hashes", opt.lsh.num_hashes);
    opt.lsh.bands = l.value("bands", opt.lsh.bands);
    opt.lsh.jaccard_threshold =
        l.value("jaccard_threshold", opt.lsh.jaccard_threshold);
  }

  if (j.contains("shard_caps")) {
    const auto& c = j["shard_caps"];
    if (c.contains("intra_bytes")) {
      opt.caps.intra_bytes = c["intra_bytes"].get<std::uint64_t>();
      opt.caps.inter_bytes = opt.caps.intra_bytes / 2;
    }
    if (c.contains("inter_bytes"))
      opt.caps.inter_bytes = c["inter_bytes"].get<std::uint64_t>();
  }

  if (j.contains("language_modes"))
    for (const auto& [lang, mode] : j["language_modes"].items()) {
      const std::string m = mode.get<std::string>();
      if (m == "intra")
        opt.language_modes[lang] = ShardMode::kIntra;
      else if (m == "inter")
        opt.language_modes[lang] = ShardMode::kInter;
      else
        throw std::runtime_error("unknown shard mode for " + lang + ": " + m);
    }

  opt.strict_parse = j.value("strict_parse", false);
  opt.max_parallel_jobs = j.value("max_parallel_jobs", 0u);
  return opt;
}

PipelineStats run_pipeline(const PipelineOptions& opt, const fs::path& input,
                           const fs::path& out_dir, std::uint64_t seed) {
  const FilterConfig fcfg = opt.filter_config_file.empty()
                                ? FilterConfig::builtin_defaults()
                                : FilterConfig::load(opt.filter_config_file);
  const auto classifier = build_classifier(opt, fcfg);
  LshParams lsh = opt.lsh;
  lsh.master_seed = seed;
  lsh.validate();

  fs::create_directories(out_dir);
  PipelineStats stats;
  const ReaderOptions read_opt{opt.strict_parse};

  // Stage 1: normalize. Bytes in are raw, bytes out are normalized.
  const fs::path d1 = out_dir / kStageDirs[0];
  fs::create_directories(d1 / "docs");
  {
    JsonlWriter removed(d1 / "removed.jsonl");
    for (const auto& file : input_files(input)) {
      JsonlReader reader(file, read_opt);
      JsonlWriter out(d1 / "docs" / file.filename());
      while (auto doc = reader.next()) {
        stats.record_in("normalize", *doc);
        Document norm = normalize_document(std::move(*doc));
        if (norm.removed()) {
          removed.write(norm);
        } else {
          stats.record_out("normalize", norm);
          out.write(norm);
        }
      }
      out.commit();
      stats.counters["parse_errors"] += reader.stats().parse_errors;
      stats.counters["unknown_category"] += reader.stats().unknown_category;
    }
    removed.commit();
  }

  // Stage 2: metric annotation. No removals, text unchanged.
  const fs::path d2 = out_dir / kStageDirs[1];
  fs::create_directories(d2 / "docs");
  for (const auto& file : list_jsonl_files(d1 / "docs")) {
    JsonlReader reader(file, read_opt);
    JsonlWriter out(d2 / "docs" / file.filename());
    while (auto doc = reader.next()) {
      Document annotated = annotate_metrics(std::move(*doc), *classifier);
      stats.record_in("metrics", annotated);
      stats.record_out("metrics", annotated);
      out.write(annotated);
    }
    out.commit();
  }

  // Stage 3: quality filters.
  const fs::path d3 = out_dir / kStageDirs[2];
  fs::create_directories(d3 / "docs");
  {
    JsonlWriter removed(d3 / "removed.jsonl");
    for (const auto& file : list_jsonl_files(d2 / "docs")) {
      JsonlReader reader(file, read_opt);
      JsonlWriter out(d3 / "docs" / file.filename());
      while (auto doc = reader.next()) {
        stats.record_in("filter", *doc);
        FilterOutcome outcome = evaluate_document(std::move(*doc), fcfg);
        if (outcome.used_default_subset)
          ++stats.counters["filter_default_subset_docs"];
        if (outcome.doc.removed()) {
          for (const auto& failed : outcome.doc.filters_failed)
            stats.per_filter_removed_bytes[failed] += outcome.doc.text.size();
          removed.write(outcome.doc);
        } else {
          stats.record_out("filter", outcome.doc);
          out.write(outcome.doc);
        }
      }
      out.commit();
    }
    removed.commit();
  }

  // Stage 4: exact deduplication, one seen-set across all files in sorted
  // file order (the stable ingest order).
  const fs::path d4 = out_dir / kStageDirs[3];
  fs::create_directories(d4 / "docs");
  {
    ExactDeduper deduper;
    JsonlWriter removed(d4 / "removed.jsonl");
    for (const auto& file : list_jsonl_files(d3 / "docs")) {
      JsonlReader reader(file, read_opt);
      JsonlWriter out(d4 / "docs" / file.filename());
      while (auto doc = reader.next()) {
        stats.record_in("dedup_exact", *doc);
        Document processed = deduper.process(std::move(*doc));
        if (processed.removed()) {
          removed.write(processed);
        } else {
          stats.record_out("dedup_exact", processed);
          out.write(processed);
        }
      }
      out.commit();
    }
    removed.commit();
    stats.counters["md5_computed"] += deduper.stats().md5_computed;
  }

  // Stage 5: segmentation by language; no removals.
  const fs::path d5 = out_dir / kStageDirs[4];
  fs::create_directories(d5 / "docs");
  for (const auto& file : list_jsonl_files(d4 / "docs")) {
    JsonlReader reader(file, read_opt);
    std::map<std::string, std::unique_ptr<JsonlWriter>> writers;
    while (auto doc = reader.next()) {
      if (!doc->metrics)
        throw std::runtime_error("segment stage: document without metrics: " +
                                 doc->id);
      stats.record_in("segment", *doc);
      stats.record_out("segment", *doc);
      auto& writer = writers[doc->metrics->lang];
      if (!writer)
        writer = std::make_unique<JsonlWriter>(d5 / "docs" / doc->metrics->lang /
                                               file.filename());
      writer->write(*doc);
    }
    for (auto& [lang, writer] : writers) writer->commit();
  }

  // Stage 6: fuzzy deduplication per language.
  const fs::path d6 = out_dir / kStageDirs[5];
  fs::create_directories(d6 / "docs");
  std::vector<DuplicateGroup> all_groups;
  {
    JsonlWriter removed(d6 / "removed.jsonl");
    for (const auto& lang_dir : subdirectories(d5 / "docs")) {
      const std::string lang = lang_dir.filename().string();
      const auto files = list_jsonl_files(lang_dir);

      std::vector<ShardFile> shard_files;
      for (const auto& f : files)
        shard_files.push_back({f, fs::file_size(f), f.stem().string()});
      const auto mode_it = opt.language_modes.find(lang);
      const ShardMode mode =
          mode_it == opt.language_modes.end() ? ShardMode::kIntra : mode_it->second;
      const ShardPlan plan =
          plan_shards_for_language(lang, shard_files, mode, opt.caps);

      auto load_shard = [&](const ShardDescriptor& shard) {
        std::vector<Document> docs;
        for (const auto& f : shard.files)
          for (auto& doc : read_all(f.path, read_opt)) docs.push_back(std::move(doc));
        return docs;
      };

      std::vector<DuplicateGroup> lang_groups;
      if (plan.shards.size() <= 1 || plan.mode == ShardMode::kIntra) {
        for (const auto& shard : plan.shards) {
          auto groups = build_groups(duplicate_edges(load_shard(shard), lsh));
          lang_groups.insert(lang_groups.end(),
                             std::make_move_iterator(groups.begin()),
                             std::make_move_iterator(groups.end()));
        }
      } else {
        std::vector<std::vector<Document>> shards;
        shards.reserve(plan.shards.size());
        for (const auto& shard : plan.shards) shards.push_back(load_shard(shard));
        lang_groups =
            inter_shard_dedup(shards, lsh, opt.max_parallel_jobs).groups;
      }

      std::unordered_set<std::string> losers;
      for (const auto& g : lang_groups) {
        ++stats.group_size_histogram[g.size()];
        for (std::size_t i = 1; i < g.member_ids.size(); ++i)
          losers.insert(g.member_ids[i]);
      }
      all_groups.insert(all_groups.end(),
                        std::make_move_iterator(lang_groups.begin()),
                        std::make_move_iterator(lang_groups.end()));

      for (const auto& f : files) {
        JsonlReader reader(f, read_opt);
        JsonlWriter out(d6 / "docs" / lang / f.filename());
        while (auto doc = reader.next()) {
          stats.record_in("dedup_fuzzy", *doc);
          if (losers.count(doc->id)) {
            doc->removed_stage = std::string(stage::kDedupFuzzy);
            removed.write(*doc);
          } else {
            stats.record_out("dedup_fuzzy", *doc);
            out.write(*doc);
          }
        }
        out.commit();
      }
    }
    removed.commit();
  }
  write_groups(all_groups, d6 / "groups.jsonl");

  // Stage 7: merge into one file per category.
  const fs::path d7 = out_dir / kStageDirs[6];
  fs::create_directories(d7);
  {
    std::map<std::string, std::unique_ptr<JsonlWriter>> writers;
    std::unordered_set<std::string> seen_ids;
    for (const auto& lang_dir : subdirectories(d6 / "docs")) {
      const std::string lang = lang_dir.filename().string();
      for (const auto& f : list_jsonl_files(lang_dir)) {
        JsonlReader reader(f, read_opt);
        while (auto doc = reader.next()) {
          stats.record_in("merge", *doc);
          if (!seen_ids.insert(doc->id).second)
            throw std::runtime_error(
                "duplicate document id reached the merge stage: " + doc->id);
          stats.record_out("merge", *doc);
          auto& writer = writers[doc->category];
          if (!writer)
            writer = std::make_unique<JsonlWriter>(
                d7 / (normalize_subset_key(doc->category) + ".jsonl"));
          writer->write(*doc);
          stats.final_bytes[doc->category][lang] += doc->text.size();
        }
      }
    }
    for (auto& [category, writer] : writers) writer->commit();
  }

  return stats;
}

}  // namespace corpuskit
