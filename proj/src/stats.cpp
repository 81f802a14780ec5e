#include "corpuskit/stats.hpp"

#include <fstream>

namespace corpuskit {

void PipelineStats::record_in(std::string_view stage, const Document& doc) {
  const std::string key(stage);
  auto& s = per_stage[key];
  ++s.docs_in;
  s.bytes_in += doc.text.size();

  auto& c = per_category[doc.category][key];
  ++c.docs_in;
  c.bytes_in += doc.text.size();

  if (doc.metrics) {
    auto& l = per_language[doc.metrics->lang][key];
    ++l.docs_in;
    l.bytes_in += doc.text.size();
  }
}

void PipelineStats::record_out(std::string_view stage, const Document& doc) {
  const std::string key(stage);
  auto& s = per_stage[key];
  ++s.docs_out;
  s.bytes_out += doc.text.size();

  auto& c = per_category[doc.category][key];
  ++c.docs_out;
  c.bytes_out += doc.text.size();

  if (doc.metrics) {
    auto& l = per_language[doc.metrics->lang][key];
    ++l.docs_out;
    l.bytes_out += doc.text.size();
  }
}

namespace {

nlohmann::ordered_json counters_json(const StageCounters& c) {
  nlohmann::ordered_json j;
  j["docs_in"] = c.docs_in;
  j["docs_out"] = c.docs_out;
  j["bytes_in"] = c.bytes_in;
  j["bytes_out"] = c.bytes_out;
  return j;
}

nlohmann::ordered_json stage_map_json(
    const std::map<std::string, StageCounters>& stages) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (auto stage : kStageOrder) {
    const auto it = stages.find(std::string(stage));
    if (it != stages.end()) j[std::string(stage)] = counters_json(it->second);
  }
  return j;
}

}  // namespace

nlohmann::ordered_json PipelineStats::to_json() const {
  nlohmann::ordered_json j;

  j["per_stage"] = stage_map_json(per_stage);

  j["per_filter_removed_bytes"] = nlohmann::ordered_json::object();
  for (const auto& [filter, bytes] : per_filter_removed_bytes)
    j["per_filter_removed_bytes"][filter] = bytes;

  j["group_size_histogram"] = nlohmann::ordered_json::object();
  for (const auto& [size, count] : group_size_histogram)
    j["group_size_histogram"][std::to_string(size)] = count;

  j["per_language"] = nlohmann::ordered_json::object();
  for (const auto& [lang, stages] : per_language)
    j["per_language"][lang] = stage_map_json(stages);

  j["per_category"] = nlohmann::ordered_json::object();
  for (const auto& [category, stages] : per_category)
    j["per_category"][category] = stage_map_json(stages);

  j["final_bytes"] = nlohmann::ordered_json::object();
  std::uint64_t total_bytes = 0;
  std::map<std::string, std::uint64_t> lang_totals;
  std::map<std::string, std::uint64_t> category_totals;
  for (const auto& [category, langs] : final_bytes) {
    auto row = nlohmann::ordered_json::object();
    for (const auto& [lang, bytes] : langs) {
      row[lang] = bytes;
      total_bytes += bytes;
      lang_totals[lang] += bytes;
      category_totals[category] += bytes;
    }
    j["final_bytes"][category] = std::move(row);
  }
  j["final_total_bytes"] = total_bytes;

  // Percentages of the final byte total (Tables 2-3 semantics). Text bytes
  // only; metadata is not counted anywhere in this report.
  auto percent = [&](std::uint64_t part) {
    return total_bytes == 0 ? 0.0
                            : 100.0 * static_cast<double>(part) /
                                  static_cast<double>(total_bytes);
  };
  j["final_language_percent"] = nlohmann::ordered_json::object();
  for (const auto& [lang, bytes] : lang_totals)
    j["final_language_percent"][lang] = percent(bytes);
  j["final_category_percent"] = nlohmann::ordered_json::object();
  for (const auto& [category, bytes] : category_totals)
    j["final_category_percent"][category] = percent(bytes);

  j["counters"] = nlohmann::ordered_json::object();
  for (const auto& [name, value] : counters) j["counters"][name] = value;

  return j;
}

void emit_stats_report(const PipelineStats& stats,
                       const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out.is_open())
      throw std::runtime_error("cannot open for writing: " + tmp.string());
    out << stats.to_json().dump(2) << '\n';
    out.flush();
    if (!out.good()) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace corpuskit
