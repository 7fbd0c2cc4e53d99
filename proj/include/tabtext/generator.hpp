#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tabtext/planner.hpp"
#include "tabtext/prompts.hpp"
#include "tabtext/table.hpp"

namespace tabtext {

class Gateway;

struct Report {
  std::string table_id;
  std::string report_type_name;
  int row_id = 0;
  std::string text;
  std::string generation_backend;
};

struct FailureEntry {
  std::string stage;
  std::string table_id;
  std::string report_type;
  int row_id = -1;
  std::string message;
};

// Text used when every selected cell of a row is null.
inline constexpr std::string_view kEmptyRowPlaceholder =
    "No data is available for this record.";

struct GeneratedReport {
  Report report;
  std::optional<std::string> warning;
};

/// Generate one report for (row, report type). The prompt carries only the
/// selected columns; null cells are listed as unavailable. An all-null
/// selection short-circuits to the canonical placeholder with a warning.
GeneratedReport generate_report(const RowRecord& row, const ReportType& rtype,
                                const Gateway& gateway, const PromptTemplates& templates,
                                const std::string& table_id);

struct GenerationResult {
  std::vector<Report> reports;  // ordered by (report_type, row_id)
  std::vector<FailureEntry> failures;
  std::vector<std::string> warnings;
  // Report types whose failure count exceeded the 10% budget.
  std::vector<std::string> aborted_types;
};

/// All rows x all report types; failures are collected, never fatal.
/// |reports| + |failures| == rows x types.
GenerationResult generate_all(const TableSpec& table, const ReportPlan& plan,
                              const Gateway& gateway, const PromptTemplates& templates);

}  // namespace tabtext
