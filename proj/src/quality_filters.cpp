#include "corpuskit/quality_filters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "corpuskit/langid.hpp"
#include "corpuskit/metrics.hpp"
#include "corpuskit/textutil.hpp"
#include "corpuskit/unicode.hpp"

namespace corpuskit {

namespace {

const DocumentMetrics& require_metrics(const Document& doc) {
  if (!doc.metrics)
    throw std::invalid_argument("quality filters need metrics, document " + doc.id);
  return *doc.metrics;
}

struct TokenSpan {
  std::string_view tok;
  std::uint64_t cp_begin = 0;  // code point index of first char
  std::uint64_t cp_end = 0;    // one past the last char
  std::uint64_t cp_len() const { return cp_end - cp_begin; }
};

struct SpanScan {
  std::vector<TokenSpan> tokens;
  std::uint64_t total_cps = 0;
};

SpanScan token_spans(std::string_view text) {
  SpanScan scan;
  std::size_t pos = 0;
  std::uint64_t cp_index = 0;
  std::size_t tok_start_byte = std::string_view::npos;
  std::uint64_t tok_start_cp = 0;
  while (pos < text.size()) {
    const std::size_t byte_start = pos;
    const char32_t cp = uni::next_codepoint(text, pos);
    if (uni::is_whitespace(cp)) {
      if (tok_start_byte != std::string_view::npos) {
        scan.tokens.push_back({text.substr(tok_start_byte, byte_start - tok_start_byte),
                               tok_start_cp, cp_index});
        tok_start_byte = std::string_view::npos;
      }
    } else if (tok_start_byte == std::string_view::npos) {
      tok_start_byte = byte_start;
      tok_start_cp = cp_index;
    }
    ++cp_index;
  }
  if (tok_start_byte != std::string_view::npos)
    scan.tokens.push_back({text.substr(tok_start_byte), tok_start_cp, cp_index});
  scan.total_cps = cp_index;
  return scan;
}

std::string_view ltrim(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t next = pos;
    if (!uni::is_whitespace(uni::next_codepoint(s, next))) break;
    pos = next;
  }
  return s.substr(pos);
}

std::string_view rtrim(std::string_view s) {
  std::size_t pos = 0;
  std::size_t end = 0;
  while (pos < s.size())
    if (!uni::is_whitespace(uni::next_codepoint(s, pos))) end = pos;
  return s.substr(0, end);
}

double meanmed(std::vector<double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const double median =
      (n % 2 == 1) ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
  return (mean + median) / 2.0;
}

std::uint64_t count_ellipses(std::string_view text) {
  std::uint64_t count = 0;
  std::size_t pos = 0;
  std::uint64_t dot_run = 0;
  while (pos < text.size()) {
    const char32_t cp = uni::next_codepoint(text, pos);
    if (cp == U'.') {
      ++dot_run;
      continue;
    }
    if (dot_run >= 3) ++count;
    dot_run = 0;
    if (cp == U'…') ++count;
  }
  if (dot_run >= 3) ++count;
  return count;
}

struct ParsedUrl {
  std::string host;  // lowercase
  std::string path;  // starts with '/', query/fragment stripped
};

bool valid_scheme(std::string_view scheme) {
  if (scheme.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(scheme[0]))) return false;
  for (char c : scheme) {
    const auto u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && c != '+' && c != '-' && c != '.') return false;
  }
  return true;
}

std::optional<ParsedUrl> parse_url(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) return std::nullopt;
  if (!valid_scheme(url.substr(0, scheme_end))) return std::nullopt;

  std::string_view rest = url.substr(scheme_end + 3);
  const auto auth_end = rest.find_first_of("/?#");
  std::string_view authority =
      auth_end == std::string_view::npos ? rest : rest.substr(0, auth_end);

  if (const auto at = authority.rfind('@'); at != std::string_view::npos)
    authority = authority.substr(at + 1);
  if (const auto colon = authority.rfind(':'); colon != std::string_view::npos) {
    const std::string_view port = authority.substr(colon + 1);
    if (port.empty() ||
        !std::all_of(port.begin(), port.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      return std::nullopt;
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) return std::nullopt;
  for (char c : authority) {
    const auto u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && c != '.' && c != '-' && c != '_') return std::nullopt;
  }

  ParsedUrl out;
  out.host = uni::lower(authority);
  if (auth_end != std::string_view::npos && rest[auth_end] == '/') {
    std::string_view path = rest.substr(auth_end);
    const auto path_end = path.find_first_of("?#");
    if (path_end != std::string_view::npos) path = path.substr(0, path_end);
    out.path = std::string(path);
  } else {
    out.path = "/";
  }
  return out;
}

std::string path_extension(const std::string& path) {
  const auto slash = path.rfind('/');
  const std::string_view segment =
      slash == std::string::npos ? std::string_view(path)
                                 : std::string_view(path).substr(slash + 1);
  const auto dot = segment.rfind('.');
  if (dot == std::string_view::npos) return {};
  return uni::lower(segment.substr(dot));
}

// Census of exact-content repeats over a list of segments. Whitespace-only
// segments are skipped. Fractions are zero when nothing qualifies.
void duplicate_census(const std::vector<std::string_view>& segments,
                      double& dup_fraction, double& dup_char_fraction) {
  struct Entry {
    std::uint64_t count = 0;
    std::uint64_t mass = 0;  // code points of one occurrence
  };
  std::unordered_map<std::string_view, Entry> census;
  std::uint64_t total = 0;
  for (auto seg : segments) {
    if (!has_nonspace(seg)) continue;
    ++total;
    auto& e = census[seg];
    if (e.count == 0) e.mass = uni::count_codepoints(seg);
    ++e.count;
  }
  dup_fraction = 0.0;
  dup_char_fraction = 0.0;
  if (total == 0) return;
  std::uint64_t total_mass = 0;
  std::uint64_t dup_occurrences = 0;
  std::uint64_t dup_mass = 0;
  for (const auto& [seg, e] : census) {
    total_mass += e.count * e.mass;
    dup_occurrences += e.count - 1;
    dup_mass += (e.count - 1) * e.mass;
  }
  dup_fraction = static_cast<double>(dup_occurrences) / static_cast<double>(total);
  if (total_mass > 0)
    dup_char_fraction = static_cast<double>(dup_mass) / static_cast<double>(total_mass);
}

std::string ngram_key(const std::vector<TokenSpan>& toks, std::size_t i, std::size_t n) {
  std::string key;
  for (std::size_t k = 0; k < n; ++k) {
    if (k) key += '\x1F';
    key.append(toks[i + k].tok);
  }
  return key;
}

// Character mass of one n-gram occurrence: its tokens plus one joining
// space per gap.
std::uint64_t ngram_mass(const std::vector<TokenSpan>& toks, std::size_t i,
                         std::size_t n) {
  std::uint64_t mass = n - 1;
  for (std::size_t k = 0; k < n; ++k) mass += toks[i + k].cp_len();
  return mass;
}

double top_ngram_fraction(const std::vector<TokenSpan>& toks, std::size_t n,
                          std::uint64_t total_cps) {
  if (toks.size() < n || total_cps == 0) return 0.0;
  struct Entry {
    std::uint64_t count = 0;
    std::uint64_t mass = 0;
  };
  std::unordered_map<std::string, Entry> census;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    auto& e = census[ngram_key(toks, i, n)];
    if (e.count == 0) e.mass = ngram_mass(toks, i, n);
    ++e.count;
  }
  const Entry* top = nullptr;
  std::string_view top_key;
  for (const auto& [key, e] : census) {
    if (!top || e.count > top->count ||
        (e.count == top->count && key < top_key)) {
      top = &e;
      top_key = key;
    }
  }
  if (!top || top->count < 2) return 0.0;
  return static_cast<double>(top->count * top->mass) / static_cast<double>(total_cps);
}

double dup_ngram_fraction(const std::vector<TokenSpan>& toks, std::size_t n,
                          std::uint64_t total_cps) {
  if (toks.size() < n || total_cps == 0) return 0.0;
  std::unordered_map<std::string, std::uint64_t> counts;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) ++counts[ngram_key(toks, i, n)];

  // Windows come in increasing position order, so covered intervals can be
  // merged in one sweep. Coverage spans from the first to the last token of
  // the window, including whatever whitespace sits inside that span.
  std::uint64_t covered = 0;
  std::uint64_t cur_begin = 0, cur_end = 0;
  bool open = false;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    if (counts[ngram_key(toks, i, n)] < 2) continue;
    const std::uint64_t b = toks[i].cp_begin;
    const std::uint64_t e = toks[i + n - 1].cp_end;
    if (!open) {
      cur_begin = b;
      cur_end = e;
      open = true;
    } else if (b <= cur_end) {
      cur_end = std::max(cur_end, e);
    } else {
      covered += cur_end - cur_begin;
      cur_begin = b;
      cur_end = e;
    }
  }
  if (open) covered += cur_end - cur_begin;
  return static_cast<double>(covered) / static_cast<double>(total_cps);
}

}  // namespace

GopherMeasurements gopher_measurements(std::string_view text) {
  GopherMeasurements m;
  duplicate_census(split_lines(text), m.dup_line_fraction, m.dup_line_char_fraction);
  duplicate_census(split_paragraphs(text), m.dup_paragraph_fraction,
                   m.dup_paragraph_char_fraction);
  const SpanScan scan = token_spans(text);
  for (std::size_t n = 2; n <= 4; ++n)
    m.top_ngram_char_fraction[n - 2] =
        top_ngram_fraction(scan.tokens, n, scan.total_cps);
  for (std::size_t n = 5; n <= 10; ++n)
    m.dup_ngram_char_fraction[n - 5] =
        dup_ngram_fraction(scan.tokens, n, scan.total_cps);
  return m;
}

BspMeasurements bsp_measurements(std::string_view text, std::uint64_t ngram_size) {
  BspMeasurements m;
  if (ngram_size == 0) return m;
  const SpanScan scan = token_spans(text);
  const auto& toks = scan.tokens;
  if (toks.size() < ngram_size) return m;
  m.total_ngrams = toks.size() - ngram_size + 1;

  std::unordered_set<std::string> seen;
  std::uint64_t distinct = 0;
  std::uint64_t all_mass = 0;
  std::uint64_t first_mass = 0;
  for (std::size_t i = 0; i + ngram_size <= toks.size(); ++i) {
    const std::uint64_t mass = ngram_mass(toks, i, ngram_size);
    all_mass += mass;
    if (seen.insert(ngram_key(toks, i, ngram_size)).second) {
      ++distinct;
      first_mass += mass;
    }
  }
  m.word_ratio =
      1.0 - static_cast<double>(distinct) / static_cast<double>(m.total_ngrams);
  if (all_mass > 0)
    m.char_ratio = 1.0 - static_cast<double>(first_mass) / static_cast<double>(all_mass);
  return m;
}

FilterVerdict f_alpha_present(const Document& doc, const FilterConfig& cfg) {
  const auto toks = tokens(doc.text);
  FilterVerdict v{"alpha_present", true, 1.0};
  if (toks.empty()) return v;  // vacuously true
  std::uint64_t alpha_words = 0;
  for (auto tok : toks) {
    std::size_t pos = 0;
    while (pos < tok.size()) {
      if (uni::is_letter(uni::next_codepoint(tok, pos))) {
        ++alpha_words;
        break;
      }
    }
  }
  const double ratio =
      static_cast<double>(alpha_words) / static_cast<double>(toks.size());
  v.measured = ratio;
  v.passed = ratio >= cfg.params.alpha_min_word_ratio;
  return v;
}

FilterVerdict f_blacklist_urls(const Document& doc, const FilterConfig& cfg) {
  FilterVerdict v{"blacklist_urls", true, std::nullopt};
  if (!doc.url) return v;  // nothing to judge

  const auto parsed = parse_url(*doc.url);
  if (!parsed) {
    v.passed = false;
    return v;
  }
  if (cfg.blacklist_urls.count(*doc.url)) {
    v.passed = false;
    return v;
  }
  const std::string ext = path_extension(parsed->path);
  if (!ext.empty() && cfg.blacklist_extensions.count(ext)) {
    v.passed = false;
    return v;
  }
  std::string_view host = parsed->host;
  while (true) {
    if (cfg.blacklist_domains.count(std::string(host))) {
      v.passed = false;
      return v;
    }
    const auto dot = host.find('.');
    if (dot == std::string_view::npos) break;
    host = host.substr(dot + 1);
  }
  return v;
}

FilterVerdict f_digit_fraction(const Document& doc, const FilterConfig& cfg) {
  const auto& m = require_metrics(doc);
  std::uint64_t digits = 0;
  std::size_t pos = 0;
  while (pos < doc.text.size())
    if (uni::is_digit(uni::next_codepoint(doc.text, pos))) ++digits;
  const double fraction =
      m.num_chars == 0
          ? 0.0
          : static_cast<double>(digits) / static_cast<double>(m.num_chars);
  return {"digit_fraction", fraction < cfg.params.digit_max_fraction, fraction};
}

FilterVerdict f_document_length(const Document& doc, const FilterConfig& cfg) {
  const auto& m = require_metrics(doc);
  return {"document_length", m.num_chars > cfg.params.min_document_chars,
          static_cast<double>(m.num_chars)};
}

FilterVerdict f_ellipsis_word_ratio(const Document& doc, const FilterConfig& cfg) {
  const auto& m = require_metrics(doc);
  const std::uint64_t ellipses = count_ellipses(doc.text);
  // An ellipsis is always attached to a token, so ellipses > 0 implies
  // num_words > 0.
  const double ratio =
      m.num_words == 0
          ? 0.0
          : static_cast<double>(ellipses) / static_cast<double>(m.num_words);
  return {"ellipsis_word_ratio", ratio < cfg.params.ellipsis_max_word_ratio, ratio};
}

FilterVerdict f_flagged_words(const Document& doc, const FilterConfig& cfg) {
  const auto& m = require_metrics(doc);
  const auto* list = cfg.flagged_for(m.lang);
  if (!list) list = &cfg.flagged_union;

  std::uint64_t total = 0;
  double weight_sum = 0.0;
  std::unordered_set<std::string> unique;
  if (!list->empty()) {
    for (auto tok : tokens(doc.text)) {
      const std::string key = word_key(tok);
      if (key.empty()) continue;
      const auto it = list->find(key);
      if (it == list->end()) continue;
      ++total;
      weight_sum += it->second;
      unique.insert(key);
    }
  }
  FilterVerdict v{"flagged_words", true, static_cast<double>(total)};
  if (total == 0) return v;
  const double weight_budget =
      static_cast<double>(m.num_words) * cfg.params.flagged_max_weight_per_word;
  v.passed = total < cfg.params.flagged_max_total &&
             unique.size() < cfg.params.flagged_max_unique &&
             weight_sum < weight_budget;
  return v;
}

FilterVerdict f_hashtag_word_ratio(const Document& doc, const FilterConfig& cfg) {
  const auto& m = require_metrics(doc);
  std::uint64_t hashtags = 0;
  for (auto tok : tokens(doc.text))
    if (!tok.empty() && tok.front() == '#') ++hashtags;
  const double ratio =
      m.num_words == 0
          ? 0.0
          : static_cast<double>(hashtags) / static_cast<double>(m.num_words);
  return {"hashtag_word_ratio", ratio < cfg.params.hashtag_max_word_ratio, ratio};
}

FilterVerdict f_initial_bullet(const Document& doc, const FilterConfig& cfg) {
  std::uint64_t nonempty = 0;
  std::uint64_t bulleted = 0;
  for (auto line : split_lines(doc.text)) {
    if (!has_nonspace(line)) continue;
    ++nonempty;
    const std::string_view body = ltrim(line);
    for (const auto& prefix : cfg.bullet_prefixes)
      if (!prefix.empty() && body.substr(0, prefix.size()) == prefix) {
        ++bulleted;
        break;
      }
  }
  const double ratio =
      nonempty == 0 ? 0.0
                    : static_cast<double>(bulleted) / static_cast<double>(nonempty);
  const bool passed =
      ratio < cfg.params.bullet_max_line_ratio || bulleted < cfg.params.bullet_min_lines;
  return {"initial_bullet", passed, ratio};
}

FilterVerdict f_mean_line_length(const Document& doc, const FilterConfig& cfg) {
  std::vector<double> chars_per_line;
  std::vector<double> words_per_line;
  for (auto line : split_lines(doc.text)) {
    if (!has_nonspace(line)) continue;
    chars_per_line.push_back(static_cast<double>(uni::count_codepoints(line)));
    words_per_line.push_back(static_cast<double>(tokens(line).size()));
  }
  if (chars_per_line.empty()) return {"mean_line_length", false, 0.0};
  const double mm_chars = meanmed(std::move(chars_per_line));
  const double mm_words = meanmed(std::move(words_per_line));
  const bool passed = mm_chars > cfg.params.line_min_meanmed_chars &&
                      mm_words >= cfg.params.line_min_meanmed_words;
  return {"mean_line_length", passed, mm_chars};
}

FilterVerdict f_mean_word_length(const Document& doc, const FilterConfig& cfg) {
  const auto toks = tokens(doc.text);
  if (toks.empty()) return {"mean_word_length", false, 0.0};
  std::uint64_t total = 0;
  for (auto tok : toks) total += uni::count_codepoints(tok);
  const double mean = static_cast<double>(total) / static_cast<double>(toks.size());
  const bool passed =
      mean >= cfg.params.word_length_min && mean <= cfg.params.word_length_max;
  return {"mean_word_length", passed, mean};
}

FilterVerdict f_repetitive_bsp(const Document& doc, const FilterConfig& cfg) {
  const auto m = bsp_measurements(doc.text, cfg.params.bsp_ngram_size);
  if (m.total_ngrams < cfg.params.bsp_min_ngrams)
    return {"repetitive_bsp", true, std::nullopt};  // below the gate
  const bool passed = m.word_ratio < cfg.params.bsp_max_word_ratio &&
                      m.char_ratio < cfg.params.bsp_max_char_ratio;
  return {"repetitive_bsp", passed, std::max(m.word_ratio, m.char_ratio)};
}

FilterVerdict f_repetitive_gopher(const Document& doc, const FilterConfig& cfg) {
  const GopherMeasurements m = gopher_measurements(doc.text);
  const GopherThresholds& t = cfg.params.gopher;

  double badness = 0.0;
  bool passed = true;
  auto check = [&](double measure, double threshold) {
    if (!(measure < threshold)) passed = false;
    const double ratio = threshold > 0.0
                             ? measure / threshold
                             : (measure > 0.0
                                    ? std::numeric_limits<double>::infinity()
                                    : 1.0);
    badness = std::max(badness, ratio);
  };
  check(m.dup_line_fraction, t.dup_line_fraction);
  check(m.dup_paragraph_fraction, t.dup_paragraph_fraction);
  check(m.dup_line_char_fraction, t.dup_line_char_fraction);
  check(m.dup_paragraph_char_fraction, t.dup_paragraph_char_fraction);
  for (std::size_t i = 0; i < 3; ++i)
    check(m.top_ngram_char_fraction[i], t.top_ngram_char_fraction[i]);
  for (std::size_t i = 0; i < 6; ++i)
    check(m.dup_ngram_char_fraction[i], t.dup_ngram_char_fraction[i]);

  return {"repetitive_gopher", passed, badness};
}

FilterVerdict f_stop_word(const Document& doc, const FilterConfig& cfg) {
  const auto& m = require_metrics(doc);
  const auto* list = cfg.stopwords_for(m.lang);
  if (!list) list = &cfg.stopword_union;

  std::uint64_t hits = 0;
  if (!list->empty()) {
    for (auto tok : tokens(doc.text)) {
      const std::string key = word_key(tok);
      if (!key.empty() && list->count(key)) ++hits;
    }
  }
  const double ratio =
      m.num_words == 0 ? 0.0
                       : static_cast<double>(hits) / static_cast<double>(m.num_words);
  const bool passed =
      hits >= cfg.params.stop_word_min_count && ratio >= cfg.params.stop_word_min_ratio;
  return {"stop_word", passed, ratio};
}

FilterVerdict f_supported_language(const Document& doc, const FilterConfig&) {
  const auto& m = require_metrics(doc);
  return {"supported_language", is_supported_language(m.lang), std::nullopt};
}

FilterVerdict f_trailing_ellipsis(const Document& doc, const FilterConfig& cfg) {
  std::uint64_t nonempty = 0;
  std::uint64_t trailing = 0;
  for (auto line : split_lines(doc.text)) {
    if (!has_nonspace(line)) continue;
    ++nonempty;
    const std::string_view body = rtrim(line);
    if (body.ends_with("...") || body.ends_with("…")) ++trailing;
  }
  const double ratio =
      nonempty == 0 ? 0.0
                    : static_cast<double>(trailing) / static_cast<double>(nonempty);
  const bool passed = ratio < cfg.params.trailing_max_line_ratio ||
                      trailing < cfg.params.trailing_min_lines;
  return {"trailing_ellipsis", passed, ratio};
}

FilterVerdict run_filter(std::string_view filter_id, const Document& doc,
                         const FilterConfig& cfg) {
  using Fn = FilterVerdict (*)(const Document&, const FilterConfig&);
  static constexpr std::array<std::pair<std::string_view, Fn>, 15> table{{
      {"alpha_present", f_alpha_present},
      {"blacklist_urls", f_blacklist_urls},
      {"digit_fraction", f_digit_fraction},
      {"document_length", f_document_length},
      {"ellipsis_word_ratio", f_ellipsis_word_ratio},
      {"flagged_words", f_flagged_words},
      {"hashtag_word_ratio", f_hashtag_word_ratio},
      {"initial_bullet", f_initial_bullet},
      {"mean_line_length", f_mean_line_length},
      {"mean_word_length", f_mean_word_length},
      {"repetitive_bsp", f_repetitive_bsp},
      {"repetitive_gopher", f_repetitive_gopher},
      {"stop_word", f_stop_word},
      {"supported_language", f_supported_language},
      {"trailing_ellipsis", f_trailing_ellipsis},
  }};
  for (const auto& [id, fn] : table)
    if (id == filter_id) return fn(doc, cfg);
  throw std::invalid_argument("unknown filter id: " + std::string(filter_id));
}

FilterOutcome evaluate_document(Document doc, const FilterConfig& cfg) {
  require_metrics(doc);
  bool fell_back = false;
  const auto& active = cfg.subset_for(doc, &fell_back);

  FilterOutcome out;
  out.used_default_subset = fell_back;
  bool any_failed = false;
  for (const auto& id : active) {
    FilterVerdict v = run_filter(id, doc, cfg);
    if (!v.passed) {
      doc.filters_failed.push_back(v.filter_id);
      any_failed = true;
    }
    out.verdicts.push_back(std::move(v));
  }
  if (any_failed) doc.removed_stage = std::string(stage::kFilter);
  out.doc = std::move(doc);
  return out;
}

}  // namespace corpuskit
