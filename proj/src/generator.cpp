#include "tabtext/generator.hpp"

#include <algorithm>

#include "tabtext/errors.hpp"
#include "tabtext/gateway.hpp"

namespace tabtext {

GeneratedReport generate_report(const RowRecord& row, const ReportType& rtype,
                                const Gateway& gateway, const PromptTemplates& templates,
                                const std::string& table_id) {
  nlohmann::json row_json = nlohmann::json::object();
  bool any_value = false;
  for (const auto& column : rtype.columns) {
    const auto& cell = row.cell(column);
    if (cell.has_value()) {
      row_json[column] = *cell;
      any_value = true;
    } else {
      row_json[column] = nullptr;
    }
  }

  GeneratedReport out;
  out.report.table_id = table_id;
  out.report.report_type_name = rtype.name;
  out.report.row_id = row.row_id;
  out.report.generation_backend = gateway.config().model_name;

  if (!any_value) {
    out.report.text = std::string(kEmptyRowPlaceholder);
    out.warning = "row " + std::to_string(row.row_id) + " of '" + rtype.name +
                  "': all selected cells null, placeholder emitted";
    return out;
  }

  const nlohmann::json payload = {
      {"report_type", rtype.name},
      {"columns", rtype.columns},
      {"row", row_json},
  };
  ChatRequest request;
  request.system_prompt = "You write factual single-record reports from structured fields.";
  request.user_prompt = attach_data_block(
      render_template(templates.report, {{"report_type", rtype.name}}), payload);
  request.response_schema_tag = SchemaTag::report;

  out.report.text = gateway.complete(request).text;
  if (out.report.text.empty()) {
    throw GenerationError("empty passage for row " + std::to_string(row.row_id) + " of '" +
                          rtype.name + "'");
  }
  return out;
}

GenerationResult generate_all(const TableSpec& table, const ReportPlan& plan,
                              const Gateway& gateway, const PromptTemplates& templates) {
  struct Slot {
    std::optional<GeneratedReport> generated;
    std::optional<std::string> error;
  };

  const std::size_t type_count = plan.report_types.size();
  const std::size_t row_count = table.rows.size();
  std::vector<Slot> slots(type_count * row_count);

  parallel_for_indexed(slots.size(), gateway.config().max_in_flight, [&](std::size_t i) {
    const std::size_t t = i / row_count;
    const std::size_t r = i % row_count;
    try {
      slots[i].generated = generate_report(table.rows[r], plan.report_types[t], gateway,
                                           templates, table.table_id);
    } catch (const Error& e) {
      slots[i].error = e.what();
    }
  });

  GenerationResult result;
  for (std::size_t t = 0; t < type_count; ++t) {
    const ReportType& rtype = plan.report_types[t];
    std::size_t failed = 0;
    for (std::size_t r = 0; r < row_count; ++r) {
      Slot& slot = slots[t * row_count + r];
      if (slot.generated) {
        if (slot.generated->warning) result.warnings.push_back(*slot.generated->warning);
        result.reports.push_back(std::move(slot.generated->report));
      } else {
        ++failed;
        result.failures.push_back({"generate", table.table_id, rtype.name,
                                   table.rows[r].row_id,
                                   slot.error.value_or("unknown generation failure")});
      }
    }
    if (failed * 10 > row_count) {  // strictly more than 10%
      result.aborted_types.push_back(rtype.name);
    }
  }
  return result;
}

}  // namespace tabtext
