#include "corpuskit/langid.hpp"

#include <fstream>
#include <stdexcept>

#include "corpuskit/textutil.hpp"
#include "httplib.h"
#include "json.hpp"

namespace corpuskit {

bool is_supported_language(std::string_view lang) {
  for (auto l : kSupportedLanguages)
    if (l == lang) return true;
  return false;
}

std::unordered_set<std::string> load_word_list(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in.is_open())
    throw std::runtime_error("cannot open word list: " + file.string());
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos || line[begin] == '#') continue;
    const auto end = line.find_last_not_of(" \t\r");
    words.insert(line.substr(begin, end - begin + 1));
  }
  return words;
}

StopwordClassifier::StopwordClassifier(
    std::map<std::string, std::unordered_set<std::string>> lists)
    : lists_(std::move(lists)) {}

StopwordClassifier StopwordClassifier::from_dir(const std::filesystem::path& dir) {
  std::map<std::string, std::unordered_set<std::string>> lists;
  for (auto lang : kSupportedLanguages) {
    const auto file = dir / (std::string(lang) + ".txt");
    if (std::filesystem::exists(file)) lists[std::string(lang)] = load_word_list(file);
  }
  if (lists.empty())
    throw std::runtime_error("no stop-word lists found in " + dir.string());
  return StopwordClassifier(std::move(lists));
}

LanguageVerdict StopwordClassifier::identify(std::string_view text) const {
  const auto toks = tokens(text);
  if (toks.empty()) return {};

  LanguageVerdict best;
  for (const auto& [lang, words] : lists_) {  // map order makes ties deterministic
    std::size_t hits = 0;
    for (auto tok : toks) {
      const std::string key = word_key(tok);
      if (!key.empty() && words.count(key)) ++hits;
    }
    const double score = static_cast<double>(hits) / static_cast<double>(toks.size());
    if (score > best.confidence) best = {lang, score};
  }
  return best;
}

HttpClassifier::HttpClassifier(std::string base_url) : base_url_(std::move(base_url)) {}

LanguageVerdict HttpClassifier::identify(std::string_view text) const {
  httplib::Client client(base_url_);
  client.set_connection_timeout(10, 0);
  client.set_read_timeout(60, 0);

  nlohmann::json body;
  body["text"] = std::string(text);
  auto res = client.Post("/identify", body.dump(), "application/json");
  if (!res)
    throw std::runtime_error("language service unreachable: " + base_url_);
  if (res->status != 200)
    throw std::runtime_error("language service returned status " +
                             std::to_string(res->status));

  nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
  if (j.is_discarded() || !j.contains("lang") || !j["lang"].is_string())
    throw std::runtime_error("language service sent an unparseable reply");

  LanguageVerdict v;
  v.lang = j["lang"].get<std::string>();
  v.confidence = j.value("confidence", 0.0);
  return v;
}

std::unique_ptr<LanguageClassifier> make_classifier(
    const std::string& spec, const std::filesystem::path& data_dir) {
  if (spec == "baseline")
    return std::make_unique<StopwordClassifier>(
        StopwordClassifier::from_dir(data_dir / "stopwords"));
  constexpr std::string_view prefix = "external:";
  if (spec.rfind(prefix, 0) == 0)
    return std::make_unique<HttpClassifier>(spec.substr(prefix.size()));
  throw std::invalid_argument("unknown language classifier: " + spec);
}

}  // namespace corpuskit
