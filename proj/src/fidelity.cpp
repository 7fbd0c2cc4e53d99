#include "tabtext/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tabtext/gateway.hpp"
#include "tabtext/prompts.hpp"

namespace tabtext {

std::string_view to_string(Dimension d) {
  return d == Dimension::numeric ? "numeric" : "temporal";
}

bool numeric_values_match(double a, UnitTag a_tag, double b, UnitTag b_tag) {
  if ((a_tag == UnitTag::percent) != (b_tag == UnitTag::percent)) return false;
  const double tol = 0.001 * std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= tol;
}

MentionSets parse_ground_truth(const RowRecord& row,
                               const std::vector<std::string>& selected_columns) {
  MentionSets out;
  for (const auto& column : selected_columns) {
    const auto& cell = row.cell(column);
    if (!cell.has_value()) continue;
    MentionSets sets = scan_text(*cell);
    out.numerics.insert(out.numerics.end(), sets.numerics.begin(), sets.numerics.end());
    out.temporals.insert(out.temporals.end(), sets.temporals.begin(), sets.temporals.end());
  }
  return out;
}

namespace {

void finalize(DimensionScore& s) {
  s.precision = (s.tp + s.fp) > 0 ? static_cast<double>(s.tp) / (s.tp + s.fp) : 1.0;
  s.recall = (s.tp + s.fn) > 0 ? static_cast<double>(s.tp) / (s.tp + s.fn) : 1.0;
  s.f1 = (s.precision + s.recall) > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
}

// Stable order indices, so ties fall to first occurrence.
template <typename T, typename Less>
std::vector<std::size_t> sorted_indices(const std::vector<T>& items, Less less) {
  std::vector<std::size_t> idx(items.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return less(items[a], items[b]); });
  return idx;
}

}  // namespace

DimensionScore match_numeric_fidelity(const std::vector<NumericMention>& gt,
                                      const std::vector<NumericMention>& extracted) {
  DimensionScore score;
  for (bool percent_class : {false, true}) {
    std::vector<std::size_t> g, e;
    for (std::size_t i = 0; i < gt.size(); ++i) {
      if ((gt[i].unit_tag == UnitTag::percent) == percent_class) g.push_back(i);
    }
    for (std::size_t i = 0; i < extracted.size(); ++i) {
      if ((extracted[i].unit_tag == UnitTag::percent) == percent_class) e.push_back(i);
    }
    std::stable_sort(g.begin(), g.end(),
                     [&](std::size_t a, std::size_t b) { return gt[a].value < gt[b].value; });
    std::stable_sort(e.begin(), e.end(), [&](std::size_t a, std::size_t b) {
      return extracted[a].value < extracted[b].value;
    });
    std::size_t i = 0, j = 0;
    while (i < g.size() && j < e.size()) {
      const auto& a = gt[g[i]];
      const auto& b = extracted[e[j]];
      if (numeric_values_match(a.value, a.unit_tag, b.value, b.unit_tag)) {
        ++score.tp;
        score.matched_pairs.push_back({a.raw_span, b.raw_span});
        ++i;
        ++j;
      } else if (a.value < b.value) {
        ++i;
      } else {
        ++j;
      }
    }
  }
  score.fp = static_cast<int>(extracted.size()) - score.tp;
  score.fn = static_cast<int>(gt.size()) - score.tp;
  finalize(score);
  return score;
}

DimensionScore match_temporal_fidelity(const std::vector<TemporalMention>& gt,
                                       const std::vector<TemporalMention>& extracted) {
  DimensionScore score;
  auto key = [](const TemporalMention& m) {
    return std::string(to_string(m.kind)) + "|" + m.canonical;
  };
  auto less = [&](const TemporalMention& a, const TemporalMention& b) {
    return key(a) < key(b);
  };
  auto g = sorted_indices(gt, less);
  auto e = sorted_indices(extracted, less);
  std::size_t i = 0, j = 0;
  while (i < g.size() && j < e.size()) {
    const auto& a = gt[g[i]];
    const auto& b = extracted[e[j]];
    const std::string ka = key(a), kb = key(b);
    if (ka == kb) {
      ++score.tp;
      score.matched_pairs.push_back({a.raw_span, b.raw_span});
      ++i;
      ++j;
    } else if (ka < kb) {
      ++i;
    } else {
      ++j;
    }
  }
  score.fp = static_cast<int>(extracted.size()) - score.tp;
  score.fn = static_cast<int>(gt.size()) - score.tp;
  finalize(score);
  return score;
}

FidelityResult validate_report_with(const RowRecord& row,
                                    const std::vector<std::string>& selected_columns,
                                    const std::string& report_type,
                                    const MentionSets& extracted) {
  FidelityResult result;
  result.row_id = row.row_id;
  result.report_type = report_type;
  MentionSets gt = parse_ground_truth(row, selected_columns);
  result.numeric = match_numeric_fidelity(gt.numerics, extracted.numerics);
  result.temporal = match_temporal_fidelity(gt.temporals, extracted.temporals);
  return result;
}

FidelityResult validate_report(const RowRecord& row,
                               const std::vector<std::string>& selected_columns,
                               const std::string& report_type,
                               const std::string& report_text) {
  return validate_report_with(row, selected_columns, report_type, scan_text(report_text));
}

std::vector<TemporalMention> extract_temporals_via_gateway(const std::string& text,
                                                           const Gateway& gateway,
                                                           const PromptTemplates& templates) {
  ChatRequest request;
  request.system_prompt = "You spot temporal expressions in text.";
  request.user_prompt =
      attach_data_block(templates.temporal_spotting, nlohmann::json{{"text", text}});
  request.response_schema_tag = SchemaTag::temporal_spotting;

  const auto parsed = parse_lenient_json(gateway.complete(request).text);
  std::vector<TemporalMention> out;
  if (!parsed || !parsed->contains("mentions") || !parsed->at("mentions").is_array()) {
    return out;
  }
  std::size_t cursor = 0;
  for (const auto& entry : parsed->at("mentions")) {
    if (!entry.is_string()) continue;
    const std::string span = entry.get<std::string>();
    if (span.empty()) continue;
    std::size_t at = text.find(span, cursor);
    if (at == std::string::npos) at = text.find(span);  // out-of-order spotting
    if (at == std::string::npos) continue;
    // The rule-based canonicalizer stays authoritative for the normal form.
    const auto canonical = extract_temporals(span);
    if (canonical.size() != 1 || canonical[0].begin != 0 ||
        canonical[0].end != span.size()) {
      continue;
    }
    if (!out.empty() && at < out.back().end) continue;  // keep spans disjoint
    out.push_back(TemporalMention{span, canonical[0].kind, canonical[0].canonical, at,
                                  at + span.size()});
    cursor = at + span.size();
  }
  return out;
}

}  // namespace tabtext
