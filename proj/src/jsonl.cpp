#include "corpuskit/jsonl.hpp"

#include <algorithm>
#include <stdexcept>

namespace corpuskit {

namespace {

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::string file_stem(const std::filesystem::path& p) {
  auto stem = p.stem().string();
  return stem.empty() ? std::string("unknown") : stem;
}

}  // namespace

nlohmann::ordered_json document_to_json(const Document& doc) {
  nlohmann::ordered_json meta;
  meta["source"] = doc.source;
  meta["category"] = doc.category;
  if (doc.url) meta["url"] = *doc.url;
  if (doc.metrics) {
    meta["lang"] = doc.metrics->lang;
    meta["num_chars"] = doc.metrics->num_chars;
    meta["num_utf8bytes"] = doc.metrics->num_utf8bytes;
    meta["num_words"] = doc.metrics->num_words;
    meta["num_sents"] = doc.metrics->num_sents;
    meta["md5"] = doc.metrics->md5;
  }
  if (!doc.filters_failed.empty()) meta["filters_failed"] = doc.filters_failed;
  if (doc.removed_stage) meta["removed_stage"] = *doc.removed_stage;

  nlohmann::ordered_json j;
  j["id"] = doc.id;
  j["text"] = doc.text;
  j["meta"] = std::move(meta);
  return j;
}

std::optional<Document> document_from_json(const nlohmann::json& j,
                                           const std::string& default_source,
                                           const std::string& fallback_id,
                                           ReadStats& stats) {
  if (!j.is_object() || !j.contains("text") || !j["text"].is_string()) {
    ++stats.parse_errors;
    return std::nullopt;
  }

  Document doc;
  doc.text = j["text"].get<std::string>();

  const nlohmann::json empty = nlohmann::json::object();
  const nlohmann::json& meta =
      (j.contains("meta") && j["meta"].is_object()) ? j["meta"] : empty;

  doc.source = meta.value("source", default_source);
  if (doc.source.empty()) doc.source = default_source;

  if (meta.contains("category") && meta["category"].is_string()) {
    doc.category = meta["category"].get<std::string>();
    if (!is_known_category(doc.category)) {
      ++stats.unknown_category;
      doc.category = "Miscellaneous";
    }
  } else {
    doc.category = "Miscellaneous";
  }

  if (j.contains("id") && j["id"].is_string())
    doc.id = j["id"].get<std::string>();
  else if (j.contains("id") && j["id"].is_number_integer())
    doc.id = std::to_string(j["id"].get<std::int64_t>());
  else
    doc.id = fallback_id;

  if (meta.contains("url") && meta["url"].is_string())
    doc.url = meta["url"].get<std::string>();

  if (meta.contains("md5") && meta["md5"].is_string()) {
    DocumentMetrics m;
    m.lang = meta.value("lang", "und");
    m.num_chars = meta.value("num_chars", std::uint64_t{0});
    m.num_utf8bytes = meta.value("num_utf8bytes", std::uint64_t{0});
    m.num_words = meta.value("num_words", std::uint64_t{0});
    m.num_sents = meta.value("num_sents", std::uint64_t{0});
    m.md5 = meta["md5"].get<std::string>();
    doc.metrics = std::move(m);
  }

  if (meta.contains("filters_failed") && meta["filters_failed"].is_array())
    for (const auto& f : meta["filters_failed"])
      if (f.is_string()) doc.filters_failed.push_back(f.get<std::string>());

  if (meta.contains("removed_stage") && meta["removed_stage"].is_string())
    doc.removed_stage = meta["removed_stage"].get<std::string>();

  ++stats.docs;
  return doc;
}

JsonlReader::JsonlReader(std::filesystem::path path, ReaderOptions opt)
    : path_(std::move(path)), opt_(opt), in_(path_), default_source_(file_stem(path_)) {
  if (!in_.is_open())
    throw std::runtime_error("cannot open for reading: " + path_.string());
}

std::optional<Document> JsonlReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (blank(line)) continue;
    ++stats_.lines;

    nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) {
      if (opt_.strict)
        throw std::runtime_error("malformed JSON at " + path_.string() + ":" +
                                 std::to_string(line_no_));
      ++stats_.parse_errors;
      continue;
    }

    std::string source = default_source_;
    if (j.contains("meta") && j["meta"].is_object() && j["meta"].contains("source") &&
        j["meta"]["source"].is_string())
      source = j["meta"]["source"].get<std::string>();
    const std::string fallback_id = source + ":" + std::to_string(line_no_);

    auto doc = document_from_json(j, default_source_, fallback_id, stats_);
    if (doc) return doc;
    if (opt_.strict)
      throw std::runtime_error("record without text at " + path_.string() + ":" +
                               std::to_string(line_no_));
  }
  return std::nullopt;
}

JsonlWriter::JsonlWriter(std::filesystem::path path)
    : path_(std::move(path)), tmp_path_(path_.string() + ".tmp") {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  out_.open(tmp_path_, std::ios::binary | std::ios::trunc);
  if (!out_.is_open())
    throw std::runtime_error("cannot open for writing: " + tmp_path_.string());
}

JsonlWriter::~JsonlWriter() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    std::filesystem::remove(tmp_path_, ec);
  }
}

void JsonlWriter::write(const Document& doc) {
  out_ << document_to_json(doc).dump() << '\n';
  ++count_;
}

void JsonlWriter::commit() {
  out_.flush();
  if (!out_.good()) throw std::runtime_error("write failed: " + tmp_path_.string());
  out_.close();
  std::filesystem::rename(tmp_path_, path_);
  committed_ = true;
}

std::vector<Document> read_all(const std::filesystem::path& path, ReaderOptions opt,
                               ReadStats* stats) {
  JsonlReader reader(path, opt);
  std::vector<Document> docs;
  while (auto doc = reader.next()) docs.push_back(std::move(*doc));
  if (stats) *stats += reader.stats();
  return docs;
}

std::uint64_t write_all(std::span<const Document> docs,
                        const std::filesystem::path& path) {
  JsonlWriter writer(path);
  for (const auto& doc : docs) writer.write(doc);
  writer.commit();
  return writer.count();
}

std::vector<std::filesystem::path> list_jsonl_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace corpuskit
