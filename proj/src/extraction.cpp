#include "tabtext/extraction.hpp"

#include <algorithm>
#include <set>

#include "tabtext/errors.hpp"
#include "tabtext/gateway.hpp"

namespace tabtext {

namespace {

std::string collapse_whitespace(const std::string& raw) {
  std::string out;
  bool pending = false;
  for (char c : raw) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending = true;
      continue;
    }
    if (pending && !out.empty()) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

std::optional<std::vector<std::string>> parse_columns_response(const std::string& text) {
  auto j = parse_lenient_json(text);
  if (!j || !j->contains("columns") || !j->at("columns").is_array()) return std::nullopt;
  std::vector<std::string> columns;
  std::set<std::string> seen;
  for (const auto& c : j->at("columns")) {
    if (!c.is_string()) continue;
    const std::string name = collapse_whitespace(c.get<std::string>());
    if (name.empty() || !seen.insert(name).second) continue;
    columns.push_back(name);
  }
  if (columns.empty()) return std::nullopt;
  return columns;
}

}  // namespace

PredictedSchema infer_schema(const std::vector<Report>& reports, const Gateway& gateway,
                             const PromptTemplates& templates, int sample_size) {
  if (reports.empty()) throw ExtractionError("schema inference needs at least one report");

  std::vector<const Report*> ordered;
  ordered.reserve(reports.size());
  for (const auto& r : reports) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(),
            [](const Report* a, const Report* b) { return a->row_id < b->row_id; });
  const std::size_t take = std::min<std::size_t>(std::max(sample_size, 1), ordered.size());

  PredictedSchema schema;
  schema.report_type_name = reports.front().report_type_name;

  nlohmann::json texts = nlohmann::json::array();
  for (std::size_t i = 0; i < take; ++i) {
    texts.push_back(ordered[i]->text);
    schema.sample_report_ids.push_back(ordered[i]->row_id);
  }
  const nlohmann::json payload = {
      {"report_type", schema.report_type_name},
      {"reports", texts},
  };
  ChatRequest request;
  request.system_prompt = "You identify the structured fields recoverable from text.";
  request.user_prompt = attach_data_block(
      render_template(templates.schema_guess, {{"report_type", schema.report_type_name}}),
      payload);
  request.response_schema_tag = SchemaTag::schema_guess;

  auto columns = parse_columns_response(gateway.complete(request).text);
  if (!columns) {
    ChatRequest retry = request;
    retry.user_prompt =
        "Your previous reply was not valid. Reply with exactly the JSON object "
        "requested.\n\n" +
        request.user_prompt;
    columns = parse_columns_response(gateway.complete(retry).text);
    if (!columns) {
      throw ExtractionError("no usable schema proposal for '" + schema.report_type_name + "'");
    }
  }
  schema.columns = std::move(*columns);
  return schema;
}

namespace {

std::optional<KvRecord> parse_kv_response(const std::string& text,
                                          const std::vector<std::string>& columns) {
  auto j = parse_lenient_json(text);
  if (!j || !j->contains("kv") || !j->at("kv").is_object()) return std::nullopt;
  const auto& kv = j->at("kv");
  KvRecord record;
  for (const auto& column : columns) {
    if (kv.contains(column) && kv.at(column).is_string()) {
      record[column] = kv.at(column).get<std::string>();
    } else {
      record[column] = std::nullopt;
    }
  }
  return record;
}

}  // namespace

ExtractionResult extract_row(const Report& report, const PredictedSchema& schema,
                             const Gateway& gateway, const PromptTemplates& templates) {
  const nlohmann::json payload = {
      {"report_type", schema.report_type_name},
      {"columns", schema.columns},
      {"report", report.text},
  };
  ChatRequest request;
  request.system_prompt = "You extract key-value pairs from a report, verbatim.";
  request.user_prompt = attach_data_block(templates.kv_extraction, payload);
  request.response_schema_tag = SchemaTag::kv_extraction;

  auto kv = parse_kv_response(gateway.complete(request).text, schema.columns);
  if (!kv) {
    ChatRequest retry = request;
    retry.user_prompt =
        "Your previous reply was not valid. Reply with exactly the JSON object "
        "requested.\n\n" +
        request.user_prompt;
    kv = parse_kv_response(gateway.complete(retry).text, schema.columns);
    if (!kv) {
      throw ExtractionError("unparseable extraction for row " + std::to_string(report.row_id) +
                            " of '" + report.report_type_name + "'");
    }
  }

  ExtractionResult result;
  result.row_id = report.row_id;
  result.report_type_name = report.report_type_name;
  result.kv = std::move(*kv);
  return result;
}

}  // namespace tabtext
