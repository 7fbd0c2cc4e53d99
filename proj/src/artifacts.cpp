#include "tabtext/artifacts.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "tabtext/errors.hpp"

namespace tabtext {

using nlohmann::json;

json report_to_json(const Report& report) {
  return {
      {"table_id", report.table_id},
      {"report_type", report.report_type_name},
      {"row_id", report.row_id},
      {"text", report.text},
      {"backend", report.generation_backend},
  };
}

Report report_from_json(const json& j) {
  Report report;
  report.table_id = j.at("table_id").get<std::string>();
  report.report_type_name = j.at("report_type").get<std::string>();
  report.row_id = j.at("row_id").get<int>();
  report.text = j.at("text").get<std::string>();
  report.generation_backend = j.value("backend", "");
  return report;
}

namespace {

json dimension_to_json(const DimensionScore& s) {
  json pairs = json::array();
  for (const auto& p : s.matched_pairs) pairs.push_back({{"gt", p.gt}, {"extracted", p.extracted}});
  return {
      {"tp", s.tp},       {"fp", s.fp},           {"fn", s.fn},
      {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
      {"matched_pairs", pairs},
  };
}

DimensionScore dimension_from_json(const json& j) {
  DimensionScore s;
  s.tp = j.at("tp").get<int>();
  s.fp = j.at("fp").get<int>();
  s.fn = j.at("fn").get<int>();
  s.precision = j.at("precision").get<double>();
  s.recall = j.at("recall").get<double>();
  s.f1 = j.at("f1").get<double>();
  for (const auto& p : j.value("matched_pairs", json::array())) {
    s.matched_pairs.push_back({p.at("gt").get<std::string>(),
                               p.at("extracted").get<std::string>()});
  }
  return s;
}

}  // namespace

json fidelity_to_json(const FidelityResult& result) {
  return {
      {"row_id", result.row_id},
      {"report_type", result.report_type},
      {"numeric", dimension_to_json(result.numeric)},
      {"temporal", dimension_to_json(result.temporal)},
  };
}

FidelityResult fidelity_from_json(const json& j) {
  FidelityResult result;
  result.row_id = j.at("row_id").get<int>();
  result.report_type = j.at("report_type").get<std::string>();
  result.numeric = dimension_from_json(j.at("numeric"));
  result.temporal = dimension_from_json(j.at("temporal"));
  return result;
}

json judge_score_to_json(const JudgeScore& score) {
  json claims = json::array();
  for (const auto& claim : score.claims) {
    claims.push_back({{"sentence", claim.sentence}, {"supported", claim.supported}});
  }
  return {
      {"row_id", score.row_id},
      {"report_type", score.report_type},
      {"factuality", score.factuality},
      {"hallucination", score.hallucination},
      {"coherence", score.coherence},
      {"rationale", score.rationale},
      {"claims", claims},
  };
}

JudgeScore judge_score_from_json(const json& j) {
  JudgeScore score;
  score.row_id = j.at("row_id").get<int>();
  score.report_type = j.at("report_type").get<std::string>();
  score.factuality = j.at("factuality").get<int>();
  score.hallucination = j.at("hallucination").get<int>();
  score.coherence = j.at("coherence").get<int>();
  score.rationale = j.value("rationale", "");
  for (const auto& claim : j.value("claims", json::array())) {
    score.claims.push_back(
        {claim.at("sentence").get<std::string>(), claim.at("supported").get<bool>()});
  }
  return score;
}

json schema_to_json(const PredictedSchema& schema) {
  return {
      {"report_type", schema.report_type_name},
      {"columns", schema.columns},
      {"sample_report_ids", schema.sample_report_ids},
      {"prompt_includes_type_name", schema.prompt_includes_type_name},
  };
}

PredictedSchema schema_from_json(const json& j) {
  PredictedSchema schema;
  schema.report_type_name = j.at("report_type").get<std::string>();
  schema.columns = j.at("columns").get<std::vector<std::string>>();
  schema.sample_report_ids = j.value("sample_report_ids", std::vector<int>{});
  schema.prompt_includes_type_name = j.value("prompt_includes_type_name", true);
  return schema;
}

json extraction_to_json(const ExtractionResult& result) {
  json kv = json::object();
  for (const auto& [column, value] : result.kv) {
    if (value.has_value()) {
      kv[column] = *value;
    } else {
      kv[column] = nullptr;
    }
  }
  return {
      {"row_id", result.row_id},
      {"report_type", result.report_type_name},
      {"kv", kv},
  };
}

ExtractionResult extraction_from_json(const json& j) {
  ExtractionResult result;
  result.row_id = j.at("row_id").get<int>();
  result.report_type_name = j.at("report_type").get<std::string>();
  for (const auto& [column, value] : j.at("kv").items()) {
    if (value.is_null()) {
      result.kv[column] = std::nullopt;
    } else {
      result.kv[column] = value.get<std::string>();
    }
  }
  return result;
}

json failure_to_json(const FailureEntry& failure) {
  return {
      {"stage", failure.stage},
      {"table_id", failure.table_id},
      {"report_type", failure.report_type},
      {"row_id", failure.row_id},
      {"message", failure.message},
  };
}

FailureEntry failure_from_json(const json& j) {
  FailureEntry failure;
  failure.stage = j.value("stage", "");
  failure.table_id = j.value("table_id", "");
  failure.report_type = j.value("report_type", "");
  failure.row_id = j.value("row_id", -1);
  failure.message = j.value("message", "");
  return failure;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IngestError("cannot write file: " + path.string());
  out << content;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot read file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

json read_json_file(const std::filesystem::path& path) {
  auto parsed = json::parse(read_text_file(path), nullptr, false);
  if (parsed.is_discarded()) throw IngestError("malformed JSON in " + path.string());
  return parsed;
}

void write_jsonl_file(const std::filesystem::path& path, const std::vector<json>& lines) {
  std::string content;
  for (const auto& line : lines) {
    content += line.dump();
    content += '\n';
  }
  write_text_file(path, content);
}

std::vector<json> read_jsonl_file(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<json> lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto parsed = json::parse(line, nullptr, false);
    if (parsed.is_discarded()) {
      throw IngestError(path.string() + ":" + std::to_string(line_no) + ": malformed JSONL");
    }
    lines.push_back(std::move(parsed));
  }
  return lines;
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  static const char* kHex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kHex[hash & 0xf];
    hash >>= 4;
  }
  return out;
}

std::string hash_directory_tree(const std::filesystem::path& root) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::string combined;
  for (const auto& file : files) {
    combined += std::filesystem::relative(file, root).generic_string();
    combined += '\0';
    combined += fnv1a_hex(read_text_file(file));
    combined += '\n';
  }
  return fnv1a_hex(combined);
}

}  // namespace tabtext
