#include "corpuskit/dedup_exact.hpp"

#include <stdexcept>

#include "corpuskit/metrics.hpp"

namespace corpuskit {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::uint64_t parse_half(std::string_view hex) {
  std::uint64_t value = 0;
  for (char c : hex) {
    const int v = hex_value(c);
    if (v < 0) throw std::invalid_argument("bad MD5 hex digest");
    value = (value << 4) | static_cast<std::uint64_t>(v);
  }
  return value;
}

}  // namespace

Md5Digest parse_md5(std::string_view hex) {
  if (hex.size() != 32) throw std::invalid_argument("MD5 digest must be 32 hex chars");
  return {parse_half(hex.substr(0, 16)), parse_half(hex.substr(16))};
}

Document ExactDeduper::process(Document doc) {
  std::string hex;
  if (doc.metrics && !doc.metrics->md5.empty()) {
    hex = doc.metrics->md5;
  } else {
    hex = md5_hex(doc.text);
    ++stats_.md5_computed;
    if (doc.metrics) doc.metrics->md5 = hex;
  }

  if (seen_.insert(parse_md5(hex)).second) {
    ++stats_.kept;
  } else {
    doc.removed_stage = std::string(stage::kDedupExact);
    ++stats_.removed;
  }
  return doc;
}

std::pair<std::vector<Document>, std::uint64_t> exact_dedup(
    std::vector<Document> docs) {
  ExactDeduper deduper;
  for (auto& doc : docs) doc = deduper.process(std::move(doc));
  return {std::move(docs), deduper.stats().removed};
}

}  // namespace corpuskit
