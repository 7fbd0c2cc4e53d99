#include <cstdio>
#include <filesystem>
#include <map>
#include <vector>

#include "tabtext/artifacts.hpp"
#include "tabtext/errors.hpp"
#include "tabtext/judge.hpp"
#include "tabtext/matching.hpp"
#include "tabtext/orchestrator.hpp"

namespace tabtext {

using nlohmann::json;

namespace {

std::string fmt(double v, int width = 9) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%*.4f", width, v);
  return buf;
}

std::string fmt_opt(const json& v, bool force_dash, int width = 9) {
  if (force_dash || v.is_null()) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%*s", width, "--");
    return buf;
  }
  return fmt(v.get<double>(), width);
}

std::vector<std::string> table_ids(const std::filesystem::path& out) {
  std::vector<std::string> ids;
  const auto tables_dir = out / "tables";
  if (!std::filesystem::is_directory(tables_dir)) return ids;
  for (const auto& entry : std::filesystem::directory_iterator(tables_dir)) {
    if (entry.is_directory()) ids.push_back(entry.path().filename().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

json judge_section(const std::filesystem::path& out, const std::vector<std::string>& ids) {
  std::vector<JudgeScore> pooled;
  json tables = json::object();
  for (const auto& id : ids) {
    const auto file = out / "tables" / id / "judge.jsonl";
    if (!std::filesystem::exists(file)) continue;
    std::vector<JudgeScore> scores;
    for (const auto& line : read_jsonl_file(file)) {
      scores.push_back(judge_score_from_json(line));
    }
    if (scores.empty()) continue;
    const JudgeAggregate agg = aggregate_judgements(scores, id);
    tables[id] = {{"factuality", agg.mean_factuality},
                  {"hallucination", agg.mean_hallucination},
                  {"coherence", agg.mean_coherence},
                  {"overall", agg.overall},
                  {"reports", scores.size()}};
    pooled.insert(pooled.end(), scores.begin(), scores.end());
  }
  if (pooled.empty()) return nullptr;
  const JudgeAggregate agg = aggregate_judgements(pooled, "dataset");
  return {{"tables", tables},
          {"dataset",
           {{"factuality", agg.mean_factuality},
            {"hallucination", agg.mean_hallucination},
            {"coherence", agg.mean_coherence},
            {"overall", agg.overall},
            {"reports", pooled.size()}}}};
}

json fidelity_section(const std::filesystem::path& out, const std::vector<std::string>& ids) {
  double np = 0, nr = 0, nf = 0, tp = 0, tr = 0, tf = 0;
  long count = 0;
  for (const auto& id : ids) {
    const auto file = out / "tables" / id / "fidelity.jsonl";
    if (!std::filesystem::exists(file)) continue;
    for (const auto& line : read_jsonl_file(file)) {
      const FidelityResult result = fidelity_from_json(line);
      np += result.numeric.precision;
      nr += result.numeric.recall;
      nf += result.numeric.f1;
      tp += result.temporal.precision;
      tr += result.temporal.recall;
      tf += result.temporal.f1;
      ++count;
    }
  }
  if (count == 0) return nullptr;
  const double n = static_cast<double>(count);
  return {{"reports", count},
          {"numeric", {{"precision", np / n}, {"recall", nr / n}, {"f1", nf / n}}},
          {"temporal", {{"precision", tp / n}, {"recall", tr / n}, {"f1", tf / n}}}};
}

MatchScore match_score_from_json(const json& j) {
  MatchScore s;
  s.precision = j.at("precision").get<double>();
  s.recall = j.at("recall").get<double>();
  if (!j.at("f1").is_null()) s.f1 = j.at("f1").get<double>();
  s.precision_support = j.value("precision_support", 0L);
  s.recall_support = j.value("recall_support", 0L);
  s.undefined_precision = j.value("undefined_precision", false);
  return s;
}

json match_score_json(const MatchScore& s) {
  return {{"precision", s.precision},
          {"recall", s.recall},
          {"f1", s.f1.has_value() ? json(*s.f1) : json(nullptr)}};
}

json extraction_section(const std::filesystem::path& out, const std::vector<std::string>& ids) {
  std::vector<std::pair<MatchScore, long>> column_by_table;
  std::vector<std::pair<MatchScore, long>> value_by_table;
  for (const auto& id : ids) {
    const auto file = out / "tables" / id / "scores.json";
    if (!std::filesystem::exists(file)) continue;
    const json per_type = read_json_file(file);
    if (per_type.empty()) continue;
    std::vector<std::pair<MatchScore, long>> columns, values;
    for (const auto& entry : per_type) {
      columns.push_back({match_score_from_json(entry.at("column_score")), 1L});
      values.push_back({match_score_from_json(entry.at("value_score")),
                        entry.value("rows_scored", 0L)});
    }
    column_by_table.push_back({aggregate_datasets(columns), static_cast<long>(columns.size())});
    long rows = 0;
    for (const auto& [score, size] : values) rows += size;
    if (rows > 0) value_by_table.push_back({aggregate_datasets(values), rows});
  }
  if (column_by_table.empty()) return nullptr;
  json section = {{"column_identification", match_score_json(aggregate_datasets(column_by_table))}};
  if (!value_by_table.empty()) {
    section["value_extraction"] = match_score_json(aggregate_datasets(value_by_table));
  } else {
    section["value_extraction"] = nullptr;
  }
  return section;
}

json filter_section(const std::filesystem::path& out) {
  const auto file = out / "filter.json";
  if (!std::filesystem::exists(file)) return nullptr;
  return read_json_file(file);
}

std::string render_text(const json& summary, bool paper_table_style) {
  std::string text;
  char buf[256];

  if (!summary.at("judge").is_null()) {
    const auto& dataset = summary.at("judge").at("dataset");
    text += "Text quality (LLM-as-judge, 1=worst..5=best)\n";
    std::snprintf(buf, sizeof(buf), "  %-18s %9s %13s %9s %9s\n", "scope", "factuality",
                  "hallucination", "coherence", "overall");
    text += buf;
    auto judge_row = [&](const std::string& scope, const json& row) {
      std::snprintf(buf, sizeof(buf), "  %-18s %s %s %s %s\n", scope.c_str(),
                    fmt(row.at("factuality").get<double>(), 10).c_str(),
                    fmt(row.at("hallucination").get<double>(), 13).c_str(),
                    fmt(row.at("coherence").get<double>(), 9).c_str(),
                    fmt(row.at("overall").get<double>(), 9).c_str());
      text += buf;
    };
    for (const auto& [id, row] : summary.at("judge").at("tables").items()) {
      judge_row(id, row);
    }
    judge_row("dataset", dataset);
    text += "\n";
  }

  if (!summary.at("fidelity").is_null()) {
    const auto& fidelity = summary.at("fidelity");
    text += "Numeric and temporal fidelity (macro over reports)\n";
    std::snprintf(buf, sizeof(buf), "  %-18s %9s %9s %9s\n", "dimension", "precision", "recall",
                  "f1");
    text += buf;
    for (const char* dim : {"numeric", "temporal"}) {
      const auto& row = fidelity.at(dim);
      std::snprintf(buf, sizeof(buf), "  %-18s %s %s %s\n", dim,
                    fmt(row.at("precision").get<double>()).c_str(),
                    fmt(row.at("recall").get<double>()).c_str(),
                    fmt(row.at("f1").get<double>()).c_str());
      text += buf;
    }
    text += "\n";
  }

  if (!summary.at("extraction").is_null()) {
    const auto& extraction = summary.at("extraction");
    text += "Extraction performance\n";
    std::snprintf(buf, sizeof(buf), "  %-22s %9s %9s %9s\n", "scope", "precision", "recall",
                  "f1");
    text += buf;
    auto extraction_row = [&](const char* scope, const json& row, bool dash_f1) {
      if (row.is_null()) return;
      std::snprintf(buf, sizeof(buf), "  %-22s %s %s %s\n", scope,
                    fmt(row.at("precision").get<double>()).c_str(),
                    fmt(row.at("recall").get<double>()).c_str(),
                    fmt_opt(row.at("f1"), dash_f1).c_str());
      text += buf;
    };
    extraction_row("column identification", extraction.at("column_identification"), false);
    extraction_row("value extraction", extraction.at("value_extraction"), paper_table_style);
    text += "\n";
  }

  if (!summary.at("filter").is_null()) {
    const auto& filter = summary.at("filter");
    text += "Quality filter sweep on " + filter.at("dimension").get<std::string>() + "\n";
    std::snprintf(buf, sizeof(buf), "  %5s %10s %18s %18s\n", "tau", "retained",
                  "numeric p/r", "temporal p/r");
    text += buf;
    for (const auto& outcome : filter.at("sweep")) {
      auto pr = [&](const json& macro) -> std::string {
        if (macro.is_null()) return "        --/--    ";
        char cell[64];
        std::snprintf(cell, sizeof(cell), "%8.4f/%-8.4f",
                      macro.at("precision").get<double>(), macro.at("recall").get<double>());
        return cell;
      };
      std::snprintf(buf, sizeof(buf), "  %5.2f %9.4f %18s %18s\n",
                    outcome.at("tau").get<double>(),
                    outcome.at("retention_fraction").get<double>(),
                    pr(outcome.at("numeric")).c_str(), pr(outcome.at("temporal")).c_str());
      text += buf;
    }
  }

  if (text.empty()) text = "No artifacts to summarize.\n";
  return text;
}

}  // namespace

void emit_summary(const RunConfig& config) {
  const auto& out = config.output_dir;
  const std::vector<std::string> ids = table_ids(out);

  json summary = {
      {"judge", judge_section(out, ids)},
      {"fidelity", fidelity_section(out, ids)},
      {"extraction", extraction_section(out, ids)},
      {"filter", filter_section(out)},
  };
  write_json_file(out / "summary.json", summary);
  write_text_file(out / "summary.txt", render_text(summary, config.paper_table_style));
}

}  // namespace tabtext
