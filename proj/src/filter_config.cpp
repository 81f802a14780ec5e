#include "corpuskit/filter_config.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "corpuskit/langid.hpp"
#include "corpuskit/unicode.hpp"
#include "json.hpp"

namespace corpuskit {

bool is_filter_id(std::string_view id) {
  for (auto f : kFilterIds)
    if (f == id) return true;
  return false;
}

std::string normalize_subset_key(std::string_view name) {
  const std::string lowered = uni::lower(name);
  std::string out;
  bool pending_sep = false;
  std::size_t pos = 0;
  while (pos < lowered.size()) {
    const std::size_t start = pos;
    const char32_t cp = uni::next_codepoint(lowered, pos);
    if (uni::is_alphanumeric(cp)) {
      if (pending_sep && !out.empty()) out += '_';
      pending_sep = false;
      out.append(lowered, start, pos - start);
    } else {
      pending_sep = true;
    }
  }
  return out;
}

namespace {

// One row of the activation matrix: '1' marks an active filter, positions
// follow kFilterIds order.
std::vector<std::string> expand_row(std::string_view bits) {
  if (bits.size() != kFilterIds.size())
    throw std::logic_error("activation row must have 15 entries");
  std::vector<std::string> active;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] == '1') active.emplace_back(kFilterIds[i]);
  return active;
}

double require_fraction(const nlohmann::json& v, const std::string& name) {
  if (!v.is_number())
    throw std::runtime_error("filter config: " + name + " must be a number");
  const double d = v.get<double>();
  if (d < 0.0) throw std::runtime_error("filter config: " + name + " must be >= 0");
  return d;
}

std::uint64_t require_count(const nlohmann::json& v, const std::string& name) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw std::runtime_error("filter config: " + name +
                             " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

void apply_param(FilterParams& p, const std::string& name, const nlohmann::json& v) {
  auto frac = [&] { return require_fraction(v, name); };
  auto count = [&] { return require_count(v, name); };

  if (name == "alpha_min_word_ratio") p.alpha_min_word_ratio = frac();
  else if (name == "digit_max_fraction") p.digit_max_fraction = frac();
  else if (name == "min_document_chars") p.min_document_chars = count();
  else if (name == "ellipsis_max_word_ratio") p.ellipsis_max_word_ratio = frac();
  else if (name == "flagged_max_total") p.flagged_max_total = count();
  else if (name == "flagged_max_unique") p.flagged_max_unique = count();
  else if (name == "flagged_max_weight_per_word") p.flagged_max_weight_per_word = frac();
  else if (name == "hashtag_max_word_ratio") p.hashtag_max_word_ratio = frac();
  else if (name == "bullet_max_line_ratio") p.bullet_max_line_ratio = frac();
  else if (name == "bullet_min_lines") p.bullet_min_lines = count();
  else if (name == "line_min_meanmed_chars") p.line_min_meanmed_chars = frac();
  else if (name == "line_min_meanmed_words") p.line_min_meanmed_words = frac();
  else if (name == "word_length_min") p.word_length_min = frac();
  else if (name == "word_length_max") p.word_length_max = frac();
  else if (name == "bsp_max_word_ratio") p.bsp_max_word_ratio = frac();
  else if (name == "bsp_max_char_ratio") p.bsp_max_char_ratio = frac();
  else if (name == "bsp_min_ngrams") p.bsp_min_ngrams = count();
  else if (name == "bsp_ngram_size") p.bsp_ngram_size = count();
  else if (name == "gopher_max_dup_line_fraction") p.gopher.dup_line_fraction = frac();
  else if (name == "gopher_max_dup_paragraph_fraction")
    p.gopher.dup_paragraph_fraction = frac();
  else if (name == "gopher_max_dup_line_char_fraction")
    p.gopher.dup_line_char_fraction = frac();
  else if (name == "gopher_max_dup_paragraph_char_fraction")
    p.gopher.dup_paragraph_char_fraction = frac();
  else if (name == "gopher_max_top2gram_char_fraction")
    p.gopher.top_ngram_char_fraction[0] = frac();
  else if (name == "gopher_max_top3gram_char_fraction")
    p.gopher.top_ngram_char_fraction[1] = frac();
  else if (name == "gopher_max_top4gram_char_fraction")
    p.gopher.top_ngram_char_fraction[2] = frac();
  else if (name == "gopher_max_dup5gram_char_fraction")
    p.gopher.dup_ngram_char_fraction[0] = frac();
  else if (name == "gopher_max_dup6gram_char_fraction")
    p.gopher.dup_ngram_char_fraction[1] = frac();
  else if (name == "gopher_max_dup7gram_char_fraction")
    p.gopher.dup_ngram_char_fraction[2] = frac();
  else if (name == "gopher_max_dup8gram_char_fraction")
    p.gopher.dup_ngram_char_fraction[3] = frac();
  else if (name == "gopher_max_dup9gram_char_fraction")
    p.gopher.dup_ngram_char_fraction[4] = frac();
  else if (name == "gopher_max_dup10gram_char_fraction")
    p.gopher.dup_ngram_char_fraction[5] = frac();
  else if (name == "stop_word_min_count") p.stop_word_min_count = count();
  else if (name == "stop_word_min_ratio") p.stop_word_min_ratio = frac();
  else if (name == "trailing_max_line_ratio") p.trailing_max_line_ratio = frac();
  else if (name == "trailing_min_lines") p.trailing_min_lines = count();
  else throw std::runtime_error("filter config: unknown parameter " + name);
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& rel) {
  const std::filesystem::path p(rel);
  return p.is_absolute() ? p : base / p;
}

std::unordered_map<std::string, double> load_flagged_list(
    const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in.is_open())
    throw std::runtime_error("cannot open flagged-word list: " + file.string());
  std::unordered_map<std::string, double> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos || line[begin] == '#') continue;
    const auto end = line.find_last_not_of(" \t\r");
    const std::string entry = line.substr(begin, end - begin + 1);
    const auto sep = entry.find_first_of(" \t");
    std::string word = entry.substr(0, sep);
    double weight = 1.0;
    if (sep != std::string::npos) {
      try {
        weight = std::stod(entry.substr(sep + 1));
      } catch (const std::exception&) {
        throw std::runtime_error("bad weight in " + file.string() + ": " + entry);
      }
    }
    words[word] = weight;
  }
  return words;
}

std::unordered_set<std::string> load_plain_list(const std::filesystem::path& file) {
  return load_word_list(file);
}

}  // namespace

FilterConfig FilterConfig::builtin_defaults() {
  FilterConfig cfg;

  // Activation matrix, one row per subset; columns follow kFilterIds order.
  cfg.subsets["books"] = expand_row("100110111111111");
  cfg.subsets["code"] = expand_row("001100000000000");
  cfg.subsets["conversational"] = expand_row("100110111100111");
  cfg.subsets["math"] = expand_row("000010110000001");
  cfg.subsets["web_cc"] = expand_row("110111111111111");
  cfg.subsets["web_sources"] = expand_row("100110111111111");
  cfg.subsets["natural_instructions"] = expand_row("000110111100001");
  cfg.subsets["ncc"] = expand_row("100110111111111");
  cfg.subsets["pubmed_central"] = expand_row("000110011000111");
  cfg.subsets["stackexchange"] = expand_row("000110010000011");

  cfg.category_subset = {
      {"Articles", "books"},          {"Books", "books"},
      {"Code", "code"},               {"Conversational", "conversational"},
      {"Math", "math"},               {"Web CC", "web_cc"},
      {"Web Sources", "web_sources"}, {"Wikipedia", "web_sources"},
  };

  cfg.source_subset = {
      {"natural_instructions", "natural_instructions"},
      {"ncc", "ncc"},
      {"pubmed_central", "pubmed_central"},
      {"stackexchange", "stackexchange"},
      {"icelandic_gigaword", "books"},
      {"the_pile_arxiv", "stackexchange"},
      {"dn_summarization", "books"},
      {"movie_scripts", "books"},
      {"p3", "natural_instructions"},
      {"opus", "web_cc"},
  };

  cfg.default_subset = "web_cc";
  cfg.finalize();
  return cfg;
}

FilterConfig FilterConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in.is_open())
    throw std::runtime_error("cannot open filter config: " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("malformed filter config " + file.string() + ": " +
                             e.what());
  }
  if (!j.is_object())
    throw std::runtime_error("filter config must be a JSON object: " + file.string());

  FilterConfig cfg = builtin_defaults();
  const auto base = file.parent_path();

  if (j.contains("default_subset")) cfg.default_subset = j["default_subset"];

  if (j.contains("subsets"))
    for (const auto& [name, ids] : j["subsets"].items()) {
      std::vector<std::string> active;
      for (const auto& id : ids) active.push_back(id.get<std::string>());
      cfg.subsets[name] = std::move(active);
    }

  if (j.contains("categories"))
    for (const auto& [cat, subset] : j["categories"].items())
      cfg.category_subset[cat] = subset.get<std::string>();

  if (j.contains("sources"))
    for (const auto& [src, subset] : j["sources"].items())
      cfg.source_subset[normalize_subset_key(src)] = subset.get<std::string>();

  if (j.contains("params"))
    for (const auto& [name, value] : j["params"].items())
      apply_param(cfg.params, name, value);

  if (j.contains("stopwords"))
    for (const auto& [lang, path] : j["stopwords"].items())
      cfg.stopwords[lang] = load_plain_list(resolve(base, path.get<std::string>()));

  if (j.contains("flagged_words"))
    for (const auto& [lang, path] : j["flagged_words"].items())
      cfg.flagged_words[lang] =
          load_flagged_list(resolve(base, path.get<std::string>()));

  if (j.contains("url_blacklist")) {
    const auto& b = j["url_blacklist"];
    if (b.contains("domains"))
      for (auto& d : load_plain_list(resolve(base, b["domains"].get<std::string>())))
        cfg.blacklist_domains.insert(uni::lower(d));
    if (b.contains("extensions"))
      for (auto& e :
           load_plain_list(resolve(base, b["extensions"].get<std::string>()))) {
        std::string ext = uni::lower(e);
        if (!ext.empty() && ext[0] != '.') ext.insert(ext.begin(), '.');
        cfg.blacklist_extensions.insert(std::move(ext));
      }
    if (b.contains("urls"))
      for (auto& u : load_plain_list(resolve(base, b["urls"].get<std::string>())))
        cfg.blacklist_urls.insert(u);
  }

  if (j.contains("bullet_prefixes")) {
    cfg.bullet_prefixes.clear();
    for (const auto& p : j["bullet_prefixes"])
      cfg.bullet_prefixes.push_back(p.get<std::string>());
  }

  cfg.finalize();
  return cfg;
}

void FilterConfig::finalize() {
  for (auto& [name, ids] : subsets) {
    // Keep each subset in canonical filter order, without duplicates.
    std::vector<std::string> canonical;
    for (auto f : kFilterIds)
      if (std::find(ids.begin(), ids.end(), f) != ids.end())
        canonical.emplace_back(f);
    for (const auto& id : ids)
      if (!is_filter_id(id))
        throw std::runtime_error("unknown filter id in subset " + name + ": " + id);
    ids = std::move(canonical);
  }

  auto require_subset = [&](const std::string& name, const std::string& where) {
    if (!subsets.count(name))
      throw std::runtime_error("reference to undefined subset " + name + " (" +
                               where + ")");
  };
  for (const auto& [cat, subset] : category_subset) require_subset(subset, cat);
  for (const auto& [src, subset] : source_subset) require_subset(subset, src);
  require_subset(default_subset, "default_subset");

  for (const auto& [lang, words] : flagged_words)
    for (const auto& [word, weight] : words)
      if (weight < 0.0 || weight > 1.0)
        throw std::runtime_error("flagged-word weight out of [0,1] for " + word);

  stopword_union.clear();
  for (const auto& [lang, words] : stopwords)
    stopword_union.insert(words.begin(), words.end());

  flagged_union.clear();
  for (const auto& [lang, words] : flagged_words)
    for (const auto& [word, weight] : words) {
      auto [it, inserted] = flagged_union.emplace(word, weight);
      if (!inserted) it->second = std::max(it->second, weight);
    }
}

const std::vector<std::string>& FilterConfig::subset_for(const Document& doc,
                                                         bool* fell_back) const {
  if (fell_back) *fell_back = false;
  if (auto it = source_subset.find(normalize_subset_key(doc.source));
      it != source_subset.end())
    return subsets.at(it->second);
  if (auto it = category_subset.find(doc.category); it != category_subset.end())
    return subsets.at(it->second);
  if (fell_back) *fell_back = true;
  return subsets.at(default_subset);
}

const std::unordered_set<std::string>* FilterConfig::stopwords_for(
    const std::string& lang) const {
  const auto it = stopwords.find(lang);
  return it == stopwords.end() ? nullptr : &it->second;
}

const std::unordered_map<std::string, double>* FilterConfig::flagged_for(
    const std::string& lang) const {
  const auto it = flagged_words.find(lang);
  return it == flagged_words.end() ? nullptr : &it->second;
}

}  // namespace corpuskit
