#include "tabtext/prompts.hpp"

#include <fstream>
#include <sstream>

namespace tabtext {

namespace {

constexpr std::string_view kPlanTemplate =
    R"(You are designing row-level narrative reports for a data table.
Study the column names and the sample rows, then propose between one and
five report types. Each report type needs a short name and the exact set of
column names (copied verbatim from the table schema) whose values belong
together in one readable report. A column may appear in more than one
report type when it identifies the record.

Respond with JSON only:
{"report_types": [{"name": "...", "columns": ["...", "..."]}]}
)";

constexpr std::string_view kReportTemplate =
    R"(Write one short factual report about a single record, using ONLY the
fields given below. State every available value exactly: write numbers in
full expanded form with thousands separators where natural, and keep dates
verbatim or spell them out in long form. Include units when the fields give
them. A field listed as unavailable may only be mentioned as unavailable.
Never add information that is not in the fields.

Report type: {{report_type}}
)";

constexpr std::string_view kJudgeTemplate =
    R"(You are grading a generated report against the source fields it was
written from. Use the rubric below. Judge hallucination strictly against
the given fields: content that is true of the world but not grounded in
these fields still counts as hallucination.

{{rubric}}

Score each dimension from 1 to 5, explain your scores briefly, and judge
every sentence of the report as supported or unsupported by the fields.

Respond with JSON only:
{"factuality": n, "hallucination": n, "coherence": n, "rationale": "...",
 "claims": [{"sentence": "...", "supported": true}]}
)";

constexpr std::string_view kRubricTemplate =
    R"(Scoring rubric (1 = worst, 5 = best)

Factuality - do the report's claims match the source fields?
  5: every claim matches the source fields; no errors.
  4: correct apart from minor, peripheral slips.
  3: main narrative correct, some minor distortions.
  2: core information misrepresented.
  1: most claims contradict the source fields.

Hallucination - is any content ungrounded in the source fields?
  5: everything is grounded in the fields or explicitly attributed.
  4: rare minor details lack grounding.
  3: occasional ungrounded details.
  2: several unverifiable statements.
  1: heavy fabrication of critical information.

Coherence - does the report read naturally?
  5: seamless narrative with effortless transitions.
  4: clear progression, minor rough spots.
  3: acceptable but with awkward transitions.
  2: jarring transitions, disconnected sentences.
  1: hard to follow, random jumps.
)";

constexpr std::string_view kSchemaTemplate =
    R"(The texts below are reports of one type, each describing a single
record. Work out which column names could be extracted from reports like
these. Use concise names and list each column once.

Report type: {{report_type}}

Respond with JSON only: {"columns": ["...", "..."]}
)";

constexpr std::string_view kTemporalSpottingTemplate =
    R"(List every temporal expression in the text below: dates, months,
quarters, fiscal years and bare years. Copy each expression exactly as it
appears, in reading order, one entry per occurrence.

Respond with JSON only: {"mentions": ["...", "..."]}
)";

constexpr std::string_view kKvExtractionTemplate =
    R"(Extract one value for each listed column from the report below. Copy
values exactly as they appear in the text. Use null when the report gives
no value for a column.

Respond with JSON only: {"kv": {"column": "value"}}
)";

}  // namespace

const PromptTemplates& PromptTemplates::defaults() {
  static const PromptTemplates kDefaults{
      std::string(kPlanTemplate),   std::string(kReportTemplate),
      std::string(kJudgeTemplate),  std::string(kRubricTemplate),
      std::string(kSchemaTemplate), std::string(kKvExtractionTemplate),
      std::string(kTemporalSpottingTemplate)};
  return kDefaults;
}

namespace {

std::string read_or(const std::filesystem::path& file, const std::string& fallback) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return fallback;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
  const PromptTemplates& d = defaults();
  PromptTemplates t;
  t.plan = read_or(dir / "plan.txt", d.plan);
  t.report = read_or(dir / "report.txt", d.report);
  t.judge = read_or(dir / "judge.txt", d.judge);
  t.rubric = read_or(dir / "rubric.txt", d.rubric);
  t.schema_guess = read_or(dir / "schema.txt", d.schema_guess);
  t.kv_extraction = read_or(dir / "extract.txt", d.kv_extraction);
  t.temporal_spotting = read_or(dir / "temporal.txt", d.temporal_spotting);
  return t;
}

std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const std::size_t open = tmpl.find("{{", i);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(i));
      break;
    }
    out.append(tmpl.substr(i, open - i));
    const std::size_t close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) {
      out.append(tmpl.substr(open));
      break;
    }
    const std::string key(tmpl.substr(open + 2, close - open - 2));
    auto it = vars.find(key);
    if (it != vars.end()) {
      out.append(it->second);
    } else {
      out.append(tmpl.substr(open, close + 2 - open));
    }
    i = close + 2;
  }
  return out;
}

std::string attach_data_block(std::string_view prompt_body, const nlohmann::json& payload) {
  std::string out(prompt_body);
  out += "\nData:\n```json\n";
  out += payload.dump(2);
  out += "\n```\n";
  return out;
}

std::optional<std::string> find_data_block(std::string_view prompt) {
  const std::string_view opener = "```json";
  const std::size_t open = prompt.rfind(opener);
  if (open == std::string_view::npos) return std::nullopt;
  const std::size_t start = open + opener.size();
  const std::size_t close = prompt.find("```", start);
  if (close == std::string_view::npos) return std::nullopt;
  return std::string(prompt.substr(start, close - start));
}

std::optional<nlohmann::json> parse_lenient_json(std::string_view text) {
  auto try_parse = [](std::string_view s) -> std::optional<nlohmann::json> {
    auto parsed = nlohmann::json::parse(s, nullptr, false);
    if (parsed.is_discarded()) return std::nullopt;
    return parsed;
  };

  // Fenced block, if any (with or without a language tag).
  std::size_t fence = text.find("```");
  while (fence != std::string_view::npos) {
    std::size_t start = fence + 3;
    const std::size_t eol = text.find('\n', start);
    const std::size_t close = text.find("```", start);
    if (close == std::string_view::npos) break;
    if (eol != std::string_view::npos && eol < close) start = eol + 1;
    if (auto parsed = try_parse(text.substr(start, close - start))) return parsed;
    fence = text.find("```", close + 3);
  }

  if (auto parsed = try_parse(text)) return parsed;

  const std::size_t open = text.find('{');
  const std::size_t close = text.rfind('}');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    return std::nullopt;
  }
  return try_parse(text.substr(open, close - open + 1));
}

}  // namespace tabtext
