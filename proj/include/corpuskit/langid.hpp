#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>

namespace corpuskit {

inline constexpr std::array<std::string_view, 5> kSupportedLanguages = {
    "da", "en", "is", "no", "sv"};

bool is_supported_language(std::string_view lang);

struct LanguageVerdict {
  std::string lang = "und";  // "und" when no language can be established
  double confidence = 0.0;
};

class LanguageClassifier {
 public:
  virtual ~LanguageClassifier() = default;
  // Must be safe to call concurrently from many threads.
  virtual LanguageVerdict identify(std::string_view text) const = 0;
};

// Baseline classifier: votes by stop-word hits per language. The score of a
// language is (stop-word hits / total tokens); the best-scoring language
// wins, ties broken by language code order. Confidence is the winning score.
class StopwordClassifier : public LanguageClassifier {
 public:
  explicit StopwordClassifier(
      std::map<std::string, std::unordered_set<std::string>> lists);

  // Loads <dir>/<lang>.txt for every supported language that has a file.
  static StopwordClassifier from_dir(const std::filesystem::path& dir);

  LanguageVerdict identify(std::string_view text) const override;

 private:
  std::map<std::string, std::unordered_set<std::string>> lists_;
};

// Client for an external identification service:
// POST <base_url>/identify with {"text": ...} returns
// {"lang": "...", "confidence": 0.93}. Errors throw std::runtime_error.
class HttpClassifier : public LanguageClassifier {
 public:
  explicit HttpClassifier(std::string base_url);
  LanguageVerdict identify(std::string_view text) const override;

 private:
  std::string base_url_;
};

// spec is either "baseline" or "external:<base_url>"; data_dir holds the
// stopwords/ directory used by the baseline.
std::unique_ptr<LanguageClassifier> make_classifier(
    const std::string& spec, const std::filesystem::path& data_dir);

// One lowercase token per line; blank lines and '#' comments are skipped.
std::unordered_set<std::string> load_word_list(const std::filesystem::path& file);

}  // namespace corpuskit
