#pragma once

#include <string>
#include <vector>

#include "tabtext/prompts.hpp"
#include "tabtext/table.hpp"

namespace tabtext {

class Gateway;

/// A named grouping of table columns. Columns may be shared between report
/// types of the same plan (identifier reuse).
struct ReportType {
  std::string name;
  std::vector<std::string> columns;
};

struct ReportPlan {
  std::string table_id;
  std::vector<ReportType> report_types;  // between 1 and 5
  std::vector<int> sample_row_ids;
  std::vector<std::string> warnings;  // dropped columns, dropped empty types
};

/// min(n, row_count) distinct rows by a seeded uniform draw; deterministic
/// for a fixed seed across platforms.
std::vector<RowRecord> sample_rows(const TableSpec& table, int n, long seed);

/// Ask the gateway for a plan over the sampled rows and validate it against
/// the schema: unknown columns are dropped with warnings, plans with zero or
/// more than five types are rejected.
ReportPlan plan_reports(const TableSpec& table, const std::vector<RowRecord>& samples,
                        const Gateway& gateway, const PromptTemplates& templates);

nlohmann::json plan_to_json(const ReportPlan& plan);
ReportPlan plan_from_json(const nlohmann::json& j);

}  // namespace tabtext
