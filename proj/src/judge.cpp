#include "tabtext/judge.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "tabtext/errors.hpp"
#include "tabtext/gateway.hpp"

namespace tabtext {

namespace {

bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

const std::array<std::string_view, 10> kAbbreviations = {
    "Inc", "Corp", "Ltd", "Co", "Mr", "Mrs", "Ms", "Dr", "Jr", "Sr"};

// Token of letters ending right before position `dot`.
std::string_view token_before(std::string_view text, std::size_t dot) {
  std::size_t b = dot;
  while (b > 0 && is_letter(text[b - 1])) --b;
  return text.substr(b, dot - b);
}

bool abbreviation_guard(std::string_view text, std::size_t dot) {
  const std::string_view token = token_before(text, dot);
  if (token.empty()) return false;
  for (auto abbrev : kAbbreviations) {
    if (token == abbrev) return true;
  }
  // Ticker-style: short all-caps token ("HLT", "AAPL", initials).
  if (token.size() <= 5 && std::all_of(token.begin(), token.end(), is_upper)) return true;
  return false;
}

}  // namespace

std::vector<std::string> segment_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  auto emit = [&](std::size_t end) {
    std::size_t b = start, e = end;
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    if (e > b) sentences.emplace_back(text.substr(b, e - b));
    start = end;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j >= text.size()) {
      emit(i + 1);
      continue;
    }
    if (j == i + 1) continue;  // no whitespace after the terminator
    if (!is_upper(text[j])) continue;
    if (c == '.' && abbreviation_guard(text, i)) continue;
    emit(i + 1);
  }
  emit(text.size());
  return sentences;
}

double overall_from_means(double factuality, double hallucination, double coherence) {
  return (factuality + hallucination + coherence) / 3.0;
}

JudgeAggregate aggregate_judgements(const std::vector<JudgeScore>& scores,
                                    const std::string& dataset_id) {
  if (scores.empty()) throw AggregationError("aggregate_judgements over empty input");
  JudgeAggregate agg;
  agg.dataset_id = dataset_id;
  for (const auto& score : scores) {
    agg.mean_factuality += score.factuality;
    agg.mean_hallucination += score.hallucination;
    agg.mean_coherence += score.coherence;
  }
  const double n = static_cast<double>(scores.size());
  agg.mean_factuality /= n;
  agg.mean_hallucination /= n;
  agg.mean_coherence /= n;
  agg.overall = overall_from_means(agg.mean_factuality, agg.mean_hallucination,
                                   agg.mean_coherence);
  return agg;
}

namespace {

std::optional<int> score_in_range(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) return std::nullopt;
  const int v = j.at(key).get<int>();
  if (v < 1 || v > 5) return std::nullopt;
  return v;
}

struct ParsedJudgement {
  int factuality, hallucination, coherence;
  std::string rationale;
  std::vector<bool> verdicts;
};

std::optional<ParsedJudgement> parse_judgement(const std::string& text) {
  auto j = parse_lenient_json(text);
  if (!j) return std::nullopt;
  auto f = score_in_range(*j, "factuality");
  auto h = score_in_range(*j, "hallucination");
  auto c = score_in_range(*j, "coherence");
  if (!f || !h || !c) return std::nullopt;
  ParsedJudgement out{*f, *h, *c, j->value("rationale", ""), {}};
  if (j->contains("claims") && j->at("claims").is_array()) {
    for (const auto& claim : j->at("claims")) {
      out.verdicts.push_back(claim.is_object() && claim.value("supported", false));
    }
  }
  return out;
}

}  // namespace

JudgeScore judge_report(const Report& report, const RowRecord& source_row,
                        const ReportType& rtype, const Gateway& gateway,
                        const PromptTemplates& templates) {
  nlohmann::json pairs = nlohmann::json::object();
  for (const auto& column : rtype.columns) {
    const auto& cell = source_row.cell(column);
    if (cell.has_value()) {
      pairs[column] = *cell;
    } else {
      pairs[column] = nullptr;
    }
  }
  const std::string body =
      render_template(templates.judge, {{"rubric", templates.rubric}});
  const nlohmann::json payload = {{"pairs", pairs}, {"report", report.text}};

  ChatRequest request;
  request.system_prompt = "You are a meticulous evaluator of data-grounded text.";
  request.user_prompt = attach_data_block(body, payload);
  request.response_schema_tag = SchemaTag::judge;

  std::optional<ParsedJudgement> parsed = parse_judgement(gateway.complete(request).text);
  if (!parsed) {
    // one re-ask, then give up
    ChatRequest retry = request;
    retry.user_prompt =
        "Your previous reply was not valid. Reply with exactly the JSON object "
        "requested, scores as integers from 1 to 5.\n\n" +
        request.user_prompt;
    parsed = parse_judgement(gateway.complete(retry).text);
    if (!parsed) {
      throw JudgingError("unparseable judgement for row " + std::to_string(report.row_id) +
                         " of " + report.report_type_name);
    }
  }

  JudgeScore score;
  score.row_id = report.row_id;
  score.report_type = report.report_type_name;
  score.factuality = parsed->factuality;
  score.hallucination = parsed->hallucination;
  score.coherence = parsed->coherence;
  score.rationale = parsed->rationale;

  // Claims are keyed to our segmentation; verdicts align by order and any
  // sentence the judge did not cover counts unsupported.
  const std::vector<std::string> sentences = segment_sentences(report.text);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const bool supported = i < parsed->verdicts.size() && parsed->verdicts[i];
    score.claims.push_back({sentences[i], supported});
  }
  return score;
}

}  // namespace tabtext
