#pragma once

#include <string>
#include <vector>

#include "tabtext/generator.hpp"
#include "tabtext/matching.hpp"
#include "tabtext/prompts.hpp"

namespace tabtext {

class Gateway;

struct PredictedSchema {
  std::string report_type_name;
  std::vector<std::string> columns;  // normalized, deduplicated
  std::vector<int> sample_report_ids;
  bool prompt_includes_type_name = true;
};

struct ExtractionResult {
  int row_id = 0;
  std::string report_type_name;
  KvRecord kv;  // keys are a subset of the predicted schema
};

/// Infer the extractable column set from a sample of a report type's texts.
PredictedSchema infer_schema(const std::vector<Report>& reports, const Gateway& gateway,
                             const PromptTemplates& templates, int sample_size = 10);

/// Extract a value (or null) for every predicted column from one report.
ExtractionResult extract_row(const Report& report, const PredictedSchema& schema,
                             const Gateway& gateway, const PromptTemplates& templates);

}  // namespace tabtext
