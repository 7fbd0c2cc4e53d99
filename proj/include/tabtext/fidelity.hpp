#pragma once

#include <string>
#include <vector>

#include "tabtext/table.hpp"
#include "tabtext/textscan.hpp"

namespace tabtext {

enum class Dimension { numeric, temporal };

std::string_view to_string(Dimension d);

struct MatchedPair {
  std::string gt;
  std::string extracted;
};

/// Multiset-matching outcome for one dimension of one report.
/// Empty-set rule: precision is 1 when nothing was extracted, recall is 1
/// when the ground truth is empty; f1 is 0 when both components are 0.
struct DimensionScore {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  std::vector<MatchedPair> matched_pairs;
};

struct FidelityResult {
  int row_id = 0;
  std::string report_type;
  DimensionScore numeric;
  DimensionScore temporal;

  const DimensionScore& score(Dimension d) const {
    return d == Dimension::numeric ? numeric : temporal;
  }
};

/// True when two magnitudes agree within 0.1% relative tolerance
/// (|a-b| <= 0.001 * max(|a|,|b|)) and their percent-ness agrees.
/// Currency- and plain-tagged values are comparable; percent is not.
bool numeric_values_match(double a, UnitTag a_tag, double b, UnitTag b_tag);

/// Parse every non-null cell of the selected columns with the shared
/// recognizers; cells yielding no mention contribute nothing.
MentionSets parse_ground_truth(const RowRecord& row,
                               const std::vector<std::string>& selected_columns);

/// One-to-one greedy matching on sorted values; duplicates must be matched
/// as many times as they occur.
DimensionScore match_numeric_fidelity(const std::vector<NumericMention>& gt,
                                      const std::vector<NumericMention>& extracted);
DimensionScore match_temporal_fidelity(const std::vector<TemporalMention>& gt,
                                       const std::vector<TemporalMention>& extracted);

/// Full per-report validation: scan the generated text, parse the ground
/// truth cells, and match both dimensions.
FidelityResult validate_report(const RowRecord& row,
                               const std::vector<std::string>& selected_columns,
                               const std::string& report_type,
                               const std::string& report_text);

/// Same, but with the report-text mentions supplied by the caller (used by
/// the gateway-backed temporal mode).
FidelityResult validate_report_with(const RowRecord& row,
                                    const std::vector<std::string>& selected_columns,
                                    const std::string& report_type,
                                    const MentionSets& extracted);

class Gateway;
struct PromptTemplates;

/// Optional gateway-first temporal extraction. The model only spots spans;
/// every span is located in the text and normalized by the rule-based
/// canonicalizer, so canonical forms cannot drift between modes. Spans the
/// canonicalizer does not recognize are dropped.
std::vector<TemporalMention> extract_temporals_via_gateway(const std::string& text,
                                                           const Gateway& gateway,
                                                           const PromptTemplates& templates);

}  // namespace tabtext
