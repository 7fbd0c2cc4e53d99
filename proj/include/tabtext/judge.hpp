#pragma once

#include <string>
#include <vector>

#include "tabtext/generator.hpp"
#include "tabtext/planner.hpp"
#include "tabtext/prompts.hpp"
#include "tabtext/table.hpp"

namespace tabtext {

class Gateway;

struct ClaimVerdict {
  std::string sentence;
  bool supported = false;
};

struct JudgeScore {
  int row_id = 0;
  std::string report_type;
  int factuality = 0;     // 1..5
  int hallucination = 0;  // 1..5
  int coherence = 0;      // 1..5
  std::string rationale;
  std::vector<ClaimVerdict> claims;  // one per sentence of the report
};

struct JudgeAggregate {
  std::string dataset_id;
  double mean_factuality = 0.0;
  double mean_hallucination = 0.0;
  double mean_coherence = 0.0;
  double overall = 0.0;  // arithmetic mean of the three dimension means
};

/// Sentence split on '.', '!' or '?' followed by whitespace and an uppercase
/// letter (or end of text), guarded against "Inc."-style abbreviations and
/// short all-caps ticker tokens.
std::vector<std::string> segment_sentences(std::string_view text);

/// Score one report against its source row on the three rubric dimensions.
/// An out-of-range or unparseable response triggers exactly one re-ask;
/// claims are realigned to the segmenter's sentences.
JudgeScore judge_report(const Report& report, const RowRecord& source_row,
                        const ReportType& rtype, const Gateway& gateway,
                        const PromptTemplates& templates);

double overall_from_means(double factuality, double hallucination, double coherence);

JudgeAggregate aggregate_judgements(const std::vector<JudgeScore>& scores,
                                    const std::string& dataset_id);

}  // namespace tabtext
