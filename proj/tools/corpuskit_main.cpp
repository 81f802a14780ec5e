#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "corpuskit/dedup_exact.hpp"
#include "corpuskit/dedup_fuzzy.hpp"
#include "corpuskit/filter_config.hpp"
#include "corpuskit/jsonl.hpp"
#include "corpuskit/langid.hpp"
#include "corpuskit/metrics.hpp"
#include "corpuskit/minhash.hpp"
#include "corpuskit/normalize.hpp"
#include "corpuskit/pipeline.hpp"
#include "corpuskit/quality_filters.hpp"
#include "corpuskit/stats.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace corpuskit;

namespace {

const fs::path kDataDir = CORPUSKIT_DATA_DIR;

// Maps input file -> output file. A directory input mirrors filenames into
// the output directory; a file input writes the single named output file.
std::vector<std::pair<fs::path, fs::path>> io_pairs(const fs::path& in,
                                                    const fs::path& out) {
  std::vector<std::pair<fs::path, fs::path>> pairs;
  if (fs::is_directory(in)) {
    for (const auto& f : list_jsonl_files(in))
      pairs.emplace_back(f, out / f.filename());
  } else if (fs::is_regular_file(in)) {
    pairs.emplace_back(in, out);
  } else {
    throw std::runtime_error("input not found: " + in.string());
  }
  if (pairs.empty())
    throw std::runtime_error("no .jsonl files in " + in.string());
  return pairs;
}

std::vector<fs::path> expand_inputs(const std::vector<fs::path>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      for (const auto& f : list_jsonl_files(in)) files.push_back(f);
    } else if (fs::is_regular_file(in)) {
      files.push_back(in);
    } else {
      throw std::runtime_error("input not found: " + in.string());
    }
  }
  if (files.empty()) throw std::runtime_error("no input files");
  return files;
}

void cmd_normalize(const fs::path& in, const fs::path& out) {
  std::uint64_t n_in = 0, n_out = 0;
  for (const auto& [src, dst] : io_pairs(in, out)) {
    JsonlReader reader(src);
    JsonlWriter writer(dst);
    while (auto doc = reader.next()) {
      ++n_in;
      Document norm = normalize_document(std::move(*doc));
      if (!norm.removed()) {
        writer.write(norm);
        ++n_out;
      }
    }
    writer.commit();
  }
  std::cout << "normalize: kept " << n_out << " of " << n_in << " documents\n";
}

void cmd_metrics(const fs::path& in, const fs::path& out,
                 const std::string& langid_spec) {
  const auto classifier = make_classifier(langid_spec, kDataDir);
  std::uint64_t n = 0;
  for (const auto& [src, dst] : io_pairs(in, out)) {
    JsonlReader reader(src);
    JsonlWriter writer(dst);
    while (auto doc = reader.next()) {
      writer.write(annotate_metrics(std::move(*doc), *classifier));
      ++n;
    }
    writer.commit();
  }
  std::cout << "metrics: annotated " << n << " documents\n";
}

void cmd_filter(const fs::path& in, const fs::path& out, const fs::path& config,
                const fs::path& keep_rejected) {
  const FilterConfig cfg = FilterConfig::load(config);
  std::unique_ptr<std::ofstream> rejected;
  fs::path rejected_tmp;
  if (!keep_rejected.empty()) {
    rejected_tmp = keep_rejected;
    rejected_tmp += ".tmp";
    if (keep_rejected.has_parent_path())
      fs::create_directories(keep_rejected.parent_path());
    rejected = std::make_unique<std::ofstream>(rejected_tmp,
                                               std::ios::binary | std::ios::trunc);
    if (!rejected->is_open())
      throw std::runtime_error("cannot open " + rejected_tmp.string());
  }

  std::uint64_t n_in = 0, n_out = 0;
  for (const auto& [src, dst] : io_pairs(in, out)) {
    JsonlReader reader(src);
    JsonlWriter writer(dst);
    while (auto doc = reader.next()) {
      ++n_in;
      FilterOutcome outcome = evaluate_document(std::move(*doc), cfg);
      if (!outcome.doc.removed()) {
        writer.write(outcome.doc);
        ++n_out;
      } else if (rejected) {
        nlohmann::ordered_json j = document_to_json(outcome.doc);
        auto verdicts = nlohmann::ordered_json::array();
        for (const auto& v : outcome.verdicts) {
          nlohmann::ordered_json vj{{"filter", v.filter_id}, {"passed", v.passed}};
          if (v.measured) vj["measured"] = *v.measured;
          verdicts.push_back(std::move(vj));
        }
        j["verdicts"] = std::move(verdicts);
        *rejected << j.dump() << '\n';
      }
    }
    writer.commit();
  }
  if (rejected) {
    rejected->flush();
    if (!*rejected)
      throw std::runtime_error("write failed: " + rejected_tmp.string());
    rejected->close();
    fs::rename(rejected_tmp, keep_rejected);
  }
  std::cout << "filter: kept " << n_out << " of " << n_in << " documents\n";
}

void cmd_dedup_exact(const std::vector<fs::path>& inputs, const fs::path& out) {
  ExactDeduper deduper;
  JsonlWriter writer(out);
  std::uint64_t n_in = 0;
  for (const auto& file : expand_inputs(inputs)) {
    JsonlReader reader(file);
    while (auto doc = reader.next()) {
      ++n_in;
      Document processed = deduper.process(std::move(*doc));
      if (!processed.removed()) writer.write(processed);
    }
  }
  writer.commit();
  std::cout << "dedup-exact: kept " << writer.count() << " of " << n_in
            << " documents\n";
}

void cmd_segment(const fs::path& in, const fs::path& out_dir) {
  std::uint64_t n = 0;
  std::unordered_set<std::string> languages;
  for (const auto& src : expand_inputs({in})) {
    JsonlReader reader(src);
    std::map<std::string, std::unique_ptr<JsonlWriter>> writers;
    while (auto doc = reader.next()) {
      if (!doc->metrics)
        throw std::runtime_error("segment: document without metrics: " + doc->id);
      const std::string& lang = doc->metrics->lang;
      languages.insert(lang);
      auto& writer = writers[lang];
      if (!writer)
        writer = std::make_unique<JsonlWriter>(out_dir / lang / src.filename());
      writer->write(*doc);
      ++n;
    }
    for (auto& [lang, writer] : writers) writer->commit();
  }
  std::cout << "segment: wrote " << n << " documents across "
            << languages.size() << " languages\n";
}

void cmd_dedup_fuzzy(const std::string& mode_str, const fs::path& shards_dir,
                     std::uint64_t seed, double jaccard, int shingle, int hashes,
                     int bands, std::uint64_t max_shard_bytes,
                     const fs::path& groups_out, const fs::path& out_dir,
                     unsigned jobs) {
  const ShardMode mode =
      mode_str == "inter" ? ShardMode::kInter : ShardMode::kIntra;
  LshParams params;
  params.shingle_size = shingle;
  params.num_hashes = hashes;
  params.bands = bands;
  params.jaccard_threshold = jaccard;
  params.master_seed = seed;
  params.validate();

  ShardCaps caps;
  if (max_shard_bytes > 0) {
    if (mode == ShardMode::kIntra)
      caps = {max_shard_bytes, max_shard_bytes / 2};
    else
      caps = {max_shard_bytes * 2, max_shard_bytes};
  }

  std::vector<ShardFile> shard_files;
  for (const auto& f : list_jsonl_files(shards_dir))
    shard_files.push_back({f, fs::file_size(f), f.stem().string()});
  if (shard_files.empty())
    throw std::runtime_error("no .jsonl files in " + shards_dir.string());

  const ShardPlan plan = plan_shards_for_language(
      shards_dir.filename().string(), shard_files, mode, caps);

  auto load_shard = [](const ShardDescriptor& shard) {
    std::vector<Document> docs;
    for (const auto& f : shard.files)
      for (auto& d : read_all(f.path)) docs.push_back(std::move(d));
    return docs;
  };

  std::vector<DuplicateGroup> groups;
  if (plan.shards.size() <= 1 || plan.mode == ShardMode::kIntra) {
    for (const auto& shard : plan.shards) {
      auto g = build_groups(duplicate_edges(load_shard(shard), params));
      groups.insert(groups.end(), std::make_move_iterator(g.begin()),
                    std::make_move_iterator(g.end()));
    }
  } else {
    std::vector<std::vector<Document>> shards;
    shards.reserve(plan.shards.size());
    for (const auto& shard : plan.shards) shards.push_back(load_shard(shard));
    groups = inter_shard_dedup(shards, params, jobs).groups;
  }
  write_groups(groups, groups_out);

  std::unordered_set<std::string> losers;
  for (const auto& g : groups)
    for (std::size_t i = 1; i < g.member_ids.size(); ++i)
      losers.insert(g.member_ids[i]);

  if (!out_dir.empty()) {
    for (const auto& f : list_jsonl_files(shards_dir)) {
      JsonlReader reader(f);
      JsonlWriter writer(out_dir / f.filename());
      while (auto doc = reader.next())
        if (!losers.count(doc->id)) writer.write(*doc);
      writer.commit();
    }
  }
  std::cout << "dedup-fuzzy: " << plan.shards.size() << " shards, "
            << groups.size() << " duplicate groups, removed " << losers.size()
            << " documents\n";
}

void cmd_run(const fs::path& config, const fs::path& in, const fs::path& out,
             std::uint64_t seed, fs::path stats_path) {
  const PipelineOptions opt = load_run_config(config);
  const PipelineStats stats = run_pipeline(opt, in, out, seed);
  if (stats_path.empty()) stats_path = out / "stats.json";
  emit_stats_report(stats, stats_path);
  for (const auto& stage : kStageOrder) {
    const auto it = stats.per_stage.find(std::string(stage));
    if (it == stats.per_stage.end()) continue;
    std::cout << stage << ": " << it->second.docs_in << " -> "
              << it->second.docs_out << " documents\n";
  }
  std::cout << "stats: " << stats_path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corpus curation pipeline"};
  app.require_subcommand(1);

  // Separate config variables per subcommand: default_val() writes through to
  // the bound variable at construction time, so sharing one would let the last
  // default win for every subcommand.
  fs::path in, out, filter_config, run_config, keep_rejected, shards_dir,
      groups_out, stats_path;
  std::vector<fs::path> ins;
  std::string langid_spec = "baseline";
  std::string mode = "intra";
  std::uint64_t seed = 0;
  std::uint64_t max_shard_bytes = 0;
  double jaccard = 0.5;
  int shingle = 10;
  int hashes = 10;
  int bands = 2;
  unsigned jobs = 0;

  auto* normalize = app.add_subcommand(
      "normalize", "Scrub non-printing characters, unify whitespace, NFC");
  normalize->add_option("--in", in, "input .jsonl file or directory")->required();
  normalize->add_option("--out", out, "output file (or directory for directory input)")
      ->required();
  normalize->callback([&] { cmd_normalize(in, out); });

  auto* metrics = app.add_subcommand(
      "metrics", "Annotate language, counts, and MD5 per document");
  metrics->add_option("--in", in, "input .jsonl file or directory")->required();
  metrics->add_option("--out", out, "output file (or directory for directory input)")
      ->required();
  metrics->add_option("--langid", langid_spec,
                      "'baseline' or 'external:<base_url>'");
  metrics->callback([&] { cmd_metrics(in, out, langid_spec); });

  auto* filter = app.add_subcommand(
      "filter", "Apply the per-source/per-category quality filters");
  filter->add_option("--in", in, "input .jsonl file or directory")->required();
  filter->add_option("--out", out, "output file (or directory for directory input)")
      ->required();
  filter->add_option("--config", filter_config, "filter config JSON")
      ->default_val(kDataDir / "config" / "default_filters.json");
  filter->add_option("--keep-rejected", keep_rejected,
                     "also write rejected documents with their verdicts here");
  filter->callback([&] { cmd_filter(in, out, filter_config, keep_rejected); });

  auto* dedup_exact = app.add_subcommand(
      "dedup-exact", "Drop repeated documents by text MD5 (first one wins)");
  dedup_exact->add_option("--in", ins, "input files or directories")->required();
  dedup_exact->add_option("--out", out, "output .jsonl file")->required();
  dedup_exact->callback([&] { cmd_dedup_exact(ins, out); });

  auto* segment = app.add_subcommand(
      "segment", "Split documents into per-language directories");
  segment->add_option("--in", in, "input .jsonl file or directory")->required();
  segment->add_option("--out-dir", out, "output root; documents land in <lang>/")
      ->required();
  segment->callback([&] { cmd_segment(in, out); });

  auto* dedup_fuzzy = app.add_subcommand(
      "dedup-fuzzy", "Near-duplicate removal via MinHash banding per shard");
  dedup_fuzzy->add_option("--mode", mode, "intra | inter")
      ->check(CLI::IsMember({"intra", "inter"}));
  dedup_fuzzy->add_option("--shards", shards_dir, "directory of .jsonl shard files")
      ->required();
  dedup_fuzzy->add_option("--seed", seed, "master seed for the hash family");
  dedup_fuzzy->add_option("--jaccard", jaccard, "duplicate threshold (default 0.5)");
  dedup_fuzzy->add_option("--shingle", shingle, "character shingle size (default 10)");
  dedup_fuzzy->add_option("--hashes", hashes, "minhash count (default 10)");
  dedup_fuzzy->add_option("--bands", bands, "band count (default 2)");
  dedup_fuzzy->add_option("--max-shard-bytes", max_shard_bytes,
                          "shard size cap for planning (default 80 GB intra / 40 GB inter)");
  dedup_fuzzy->add_option("--groups-out", groups_out, "duplicate-groups JSONL path")
      ->required();
  dedup_fuzzy->add_option("--out-dir", out,
                          "also write surviving documents here (filenames mirrored)");
  dedup_fuzzy->add_option("--jobs", jobs, "parallel pair jobs (0 = hardware)");
  dedup_fuzzy->callback([&] {
    cmd_dedup_fuzzy(mode, shards_dir, seed, jaccard, shingle, hashes, bands,
                    max_shard_bytes, groups_out, out, jobs);
  });

  auto* run = app.add_subcommand("run", "Run all seven stages end to end");
  run->add_option("--config", run_config, "run config JSON")
      ->default_val(kDataDir / "config" / "default_run.json");
  run->add_option("--in", in, "input .jsonl file or directory")->required();
  run->add_option("--out", out, "output root for per-stage results")->required();
  run->add_option("--seed", seed, "master seed for fuzzy deduplication");
  run->add_option("--stats", stats_path, "stats report path (default <out>/stats.json)");
  run->callback([&] { cmd_run(run_config, in, out, seed, stats_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
