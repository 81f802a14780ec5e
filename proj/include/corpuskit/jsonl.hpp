#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corpuskit/document.hpp"
#include "json.hpp"

namespace corpuskit {

struct ReadStats {
  std::uint64_t lines = 0;         // non-blank input lines seen
  std::uint64_t docs = 0;          // documents successfully decoded
  std::uint64_t parse_errors = 0;  // malformed JSON or wrong shape
  std::uint64_t unknown_category = 0;

  ReadStats& operator+=(const ReadStats& o) {
    lines += o.lines;
    docs += o.docs;
    parse_errors += o.parse_errors;
    unknown_category += o.unknown_category;
    return *this;
  }
};

struct ReaderOptions {
  // Lenient mode (default) skips undecodable lines and counts them;
  // strict mode throws std::runtime_error naming the file and line.
  bool strict = false;
};

nlohmann::ordered_json document_to_json(const Document& doc);

// Decodes one record. `default_source` fills meta.source when absent;
// `fallback_id` is used when the record has no id. Returns std::nullopt
// (and bumps stats) when the record has no usable text field.
std::optional<Document> document_from_json(const nlohmann::json& j,
                                           const std::string& default_source,
                                           const std::string& fallback_id,
                                           ReadStats& stats);

// Streams one JSON-lines file without loading it whole.
class JsonlReader {
 public:
  explicit JsonlReader(std::filesystem::path path, ReaderOptions opt = {});

  std::optional<Document> next();

  const ReadStats& stats() const { return stats_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  ReaderOptions opt_;
  std::ifstream in_;
  std::string default_source_;
  std::uint64_t line_no_ = 0;
  ReadStats stats_;
};

// Writes to "<path>.tmp" and renames into place on commit, so a crash never
// leaves a half-written output under the final name.
class JsonlWriter {
 public:
  explicit JsonlWriter(std::filesystem::path path);
  ~JsonlWriter();

  JsonlWriter(const JsonlWriter&) = delete;
  JsonlWriter& operator=(const JsonlWriter&) = delete;

  void write(const Document& doc);
  std::uint64_t count() const { return count_; }
  void commit();

 private:
  std::filesystem::path path_;
  std::filesystem::path tmp_path_;
  std::ofstream out_;
  std::uint64_t count_ = 0;
  bool committed_ = false;
};

std::vector<Document> read_all(const std::filesystem::path& path,
                               ReaderOptions opt = {}, ReadStats* stats = nullptr);

std::uint64_t write_all(std::span<const Document> docs,
                        const std::filesystem::path& path);

// Sorted list of *.jsonl files directly inside `dir`.
std::vector<std::filesystem::path> list_jsonl_files(const std::filesystem::path& dir);

}  // namespace corpuskit
