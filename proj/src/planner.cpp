#include "tabtext/planner.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "tabtext/errors.hpp"
#include "tabtext/gateway.hpp"

namespace tabtext {

std::vector<RowRecord> sample_rows(const TableSpec& table, int n, long seed) {
  if (table.rows.empty()) throw PlanningError("cannot sample rows from an empty table");
  if (n <= 0) throw PlanningError("sample size must be positive");

  const std::size_t count = std::min<std::size_t>(n, table.rows.size());
  std::vector<std::size_t> indices(table.rows.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;

  // Partial Fisher-Yates with explicit modulo so the draw is identical on
  // every platform for a fixed seed.
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (indices.size() - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(count);
  std::sort(indices.begin(), indices.end());

  std::vector<RowRecord> samples;
  samples.reserve(count);
  for (std::size_t idx : indices) samples.push_back(table.rows[idx]);
  return samples;
}

namespace {

nlohmann::json row_payload(const RowRecord& row, const std::vector<std::string>& columns) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& column : columns) {
    const auto& cell = row.cell(column);
    if (cell.has_value()) {
      out[column] = *cell;
    } else {
      out[column] = nullptr;
    }
  }
  return out;
}

std::optional<nlohmann::json> parse_plan_response(const std::string& text) {
  auto j = parse_lenient_json(text);
  if (!j || !j->contains("report_types") || !j->at("report_types").is_array()) {
    return std::nullopt;
  }
  return j;
}

}  // namespace

ReportPlan plan_reports(const TableSpec& table, const std::vector<RowRecord>& samples,
                        const Gateway& gateway, const PromptTemplates& templates) {
  const std::vector<std::string> columns = table.column_names();

  nlohmann::json sample_rows_json = nlohmann::json::array();
  for (const auto& row : samples) sample_rows_json.push_back(row_payload(row, columns));
  const nlohmann::json payload = {
      {"table_id", table.table_id},
      {"columns", columns},
      {"sample_rows", sample_rows_json},
  };

  ChatRequest request;
  request.system_prompt = "You are a careful data analyst structuring tabular reports.";
  request.user_prompt = attach_data_block(templates.plan, payload);
  request.response_schema_tag = SchemaTag::plan;

  auto parsed = parse_plan_response(gateway.complete(request).text);
  if (!parsed) {
    ChatRequest retry = request;
    retry.user_prompt =
        "Your previous reply was not valid. Reply with exactly the JSON object "
        "requested.\n\n" +
        request.user_prompt;
    parsed = parse_plan_response(gateway.complete(retry).text);
    if (!parsed) throw PlanningError("unparseable plan for table " + table.table_id);
  }

  const auto& proposed = parsed->at("report_types");
  if (proposed.empty() || proposed.size() > 5) {
    throw PlanningError("plan for table " + table.table_id + " proposed " +
                        std::to_string(proposed.size()) + " report types (allowed 1..5)");
  }

  ReportPlan plan;
  plan.table_id = table.table_id;
  for (const auto& row : samples) plan.sample_row_ids.push_back(row.row_id);

  std::set<std::string> used_names;
  std::size_t type_index = 0;
  for (const auto& entry : proposed) {
    ++type_index;
    ReportType rtype;
    rtype.name = entry.is_object() ? entry.value("name", "") : "";
    if (rtype.name.empty()) rtype.name = "report type " + std::to_string(type_index);
    if (!used_names.insert(rtype.name).second) {
      std::string unique = rtype.name + " #" + std::to_string(type_index);
      plan.warnings.push_back("renamed duplicate report type '" + rtype.name + "' to '" +
                              unique + "'");
      rtype.name = std::move(unique);
      used_names.insert(rtype.name);
    }

    std::set<std::string> seen;
    if (entry.is_object() && entry.contains("columns") && entry.at("columns").is_array()) {
      for (const auto& c : entry.at("columns")) {
        if (!c.is_string()) continue;
        const std::string column = c.get<std::string>();
        if (!seen.insert(column).second) continue;
        if (table.has_column(column)) {
          rtype.columns.push_back(column);
        } else {
          plan.warnings.push_back("dropped unknown column '" + column + "' from '" +
                                  rtype.name + "'");
        }
      }
    }
    if (rtype.columns.empty()) {
      plan.warnings.push_back("dropped report type '" + rtype.name +
                              "': no schema-valid columns");
      continue;
    }
    plan.report_types.push_back(std::move(rtype));
  }

  if (plan.report_types.empty()) {
    throw PlanningError("plan for table " + table.table_id +
                        " has no schema-valid report types");
  }
  return plan;
}

nlohmann::json plan_to_json(const ReportPlan& plan) {
  nlohmann::json types = nlohmann::json::array();
  for (const auto& rtype : plan.report_types) {
    types.push_back({{"name", rtype.name}, {"columns", rtype.columns}});
  }
  return {
      {"table_id", plan.table_id},
      {"sample_row_ids", plan.sample_row_ids},
      {"report_types", types},
      {"warnings", plan.warnings},
  };
}

ReportPlan plan_from_json(const nlohmann::json& j) {
  ReportPlan plan;
  plan.table_id = j.at("table_id").get<std::string>();
  plan.sample_row_ids = j.at("sample_row_ids").get<std::vector<int>>();
  for (const auto& entry : j.at("report_types")) {
    plan.report_types.push_back(
        {entry.at("name").get<std::string>(),
         entry.at("columns").get<std::vector<std::string>>()});
  }
  plan.warnings = j.value("warnings", std::vector<std::string>{});
  return plan;
}

}  // namespace tabtext
