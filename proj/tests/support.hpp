#pragma once

// Shared helpers for the test binaries: document builders, a scratch
// directory that cleans up after itself, and small text generators.

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "corpuskit/document.hpp"
#include "corpuskit/metrics.hpp"

namespace testkit {

// Metrics computed from the text, language set directly (no classifier).
inline corpuskit::Document make_doc(std::string id, std::string text,
                                    std::string lang = "en",
                                    std::string category = "Web CC",
                                    std::string source = "test") {
  corpuskit::Document doc;
  doc.id = std::move(id);
  doc.text = std::move(text);
  doc.source = std::move(source);
  doc.category = std::move(category);
  corpuskit::DocumentMetrics m;
  m.lang = std::move(lang);
  m.num_chars = corpuskit::count_chars(doc.text);
  m.num_utf8bytes = corpuskit::count_utf8_bytes(doc.text);
  m.num_words = corpuskit::count_words(doc.text);
  m.num_sents = corpuskit::count_sentences(doc.text);
  m.md5 = corpuskit::md5_hex(doc.text);
  doc.metrics = std::move(m);
  return doc;
}

// Unique scratch directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag = "corpuskit_test") {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            (tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const {
    return path_ / rel;
  }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

// "w000", "w001", ... — distinct short tokens for building fixtures.
inline std::string filler_word(const std::string& prefix, unsigned i) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%03u", i % 1000u);
  return prefix + buf;
}

// A sentence-ish line of `n` unique filler words.
inline std::string filler_line(const std::string& prefix, unsigned& counter,
                               unsigned n = 3) {
  std::string line;
  for (unsigned i = 0; i < n; ++i) {
    if (!line.empty()) line += ' ';
    line += filler_word(prefix, counter++);
  }
  return line;
}

}  // namespace testkit
