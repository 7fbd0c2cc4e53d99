#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "tabtext/errors.hpp"
#include "tabtext/gateway.hpp"
#include "tabtext/judge.hpp"
#include "tabtext/prompts.hpp"
#include "tabtext/textscan.hpp"

namespace tabtext {

namespace {

using nlohmann::json;

json payload_of(const ChatRequest& request) {
  auto block = find_data_block(request.user_prompt);
  if (!block) {
    throw ContractError("scripted backend: prompt has no data block (tag " +
                        std::string(to_string(request.response_schema_tag)) + ")");
  }
  json payload = json::parse(*block, nullptr, false);
  if (payload.is_discarded()) {
    throw ContractError("scripted backend: data block is not valid JSON");
  }
  return payload;
}

const json& field(const json& payload, const char* name) {
  if (!payload.contains(name)) {
    throw ContractError(std::string("scripted backend: data block lacks '") + name + "'");
  }
  return payload.at(name);
}

// --- planning -------------------------------------------------------------

const std::vector<std::string>& role_suffixes() {
  static const std::vector<std::string> kSuffixes = {"_filing_date", "_period", "_value",
                                                     "_date", "_unit"};
  return kSuffixes;
}

std::string base_of(const std::string& column) {
  for (const auto& suffix : role_suffixes()) {
    if (column.size() > suffix.size() &&
        column.compare(column.size() - suffix.size(), suffix.size(), suffix) == 0) {
      return column.substr(0, column.size() - suffix.size());
    }
  }
  return column;
}

std::string scripted_plan(const json& payload) {
  std::vector<std::string> columns;
  for (const auto& c : field(payload, "columns")) columns.push_back(c.get<std::string>());
  if (columns.empty()) throw ContractError("scripted backend: plan over empty column set");

  // Group columns with their base metric, first-appearance order.
  std::vector<std::pair<std::string, std::vector<std::string>>> groups;
  std::map<std::string, std::size_t> index_of;
  for (const auto& column : columns) {
    const std::string base = base_of(column);
    auto it = index_of.find(base);
    if (it == index_of.end()) {
      index_of[base] = groups.size();
      groups.push_back({base, {column}});
    } else {
      groups[it->second].second.push_back(column);
    }
  }

  // At most five report types: contiguous chunks of the group list.
  const std::size_t type_count = std::min<std::size_t>(5, groups.size());
  json report_types = json::array();
  std::size_t begin = 0;
  for (std::size_t t = 0; t < type_count; ++t) {
    const std::size_t remaining = groups.size() - begin;
    const std::size_t take = (remaining + (type_count - t) - 1) / (type_count - t);
    json cols = json::array();
    for (std::size_t g = begin; g < begin + take; ++g) {
      for (const auto& column : groups[g].second) cols.push_back(column);
    }
    report_types.push_back({{"name", groups[begin].first + " report"}, {"columns", cols}});
    begin += take;
  }
  return json{{"report_types", report_types}}.dump(2);
}

// --- report text ----------------------------------------------------------

std::string scripted_report(const json& payload) {
  const json& row = field(payload, "row");
  std::string text;
  for (const auto& c : field(payload, "columns")) {
    const std::string column = c.get<std::string>();
    if (!text.empty()) text += " ";
    text += "The " + column + " of this record is ";
    if (row.contains(column) && !row.at(column).is_null()) {
      text += row.at(column).get<std::string>();
    } else {
      text += "unavailable";
    }
    text += ".";
  }
  return text;
}

// --- judging --------------------------------------------------------------

struct TemplateClaim {
  std::string column;
  std::string value;  // "unavailable" for null sentences
};

// All "The <col> of this record is <val>." facts inside one text span.
std::vector<TemplateClaim> template_claims(const std::string& text) {
  std::vector<TemplateClaim> claims;
  const std::string head = "The ";
  const std::string mid = " of this record is ";
  std::size_t pos = 0;
  while ((pos = text.find(head, pos)) != std::string::npos) {
    const std::size_t mid_at = text.find(mid, pos + head.size());
    if (mid_at == std::string::npos) break;
    const std::string column = text.substr(pos + head.size(), mid_at - pos - head.size());
    const std::size_t value_at = mid_at + mid.size();
    std::size_t value_end = text.find(". The ", value_at);
    if (value_end == std::string::npos) {
      value_end = text.size();
      if (value_end > value_at && text[value_end - 1] == '.') --value_end;
    }
    claims.push_back({column, text.substr(value_at, value_end - value_at)});
    pos = value_at;
  }
  return claims;
}

bool claim_grounded(const TemplateClaim& claim, const json& pairs) {
  if (!pairs.contains(claim.column)) return false;
  const json& cell = pairs.at(claim.column);
  if (cell.is_null()) return claim.value == "unavailable";
  return cell.get<std::string>() == claim.value;
}

std::string scripted_judge(const json& payload) {
  const json& pairs = field(payload, "pairs");
  const std::string report = field(payload, "report").get<std::string>();

  json claims = json::array();
  int unsupported = 0;
  for (const auto& sentence : segment_sentences(report)) {
    bool supported = true;
    for (const auto& claim : template_claims(sentence)) {
      if (!claim_grounded(claim, pairs)) supported = false;
    }
    if (!supported) ++unsupported;
    claims.push_back({{"sentence", sentence}, {"supported", supported}});
  }

  const bool clean = unsupported == 0;
  json out = {
      {"factuality", clean ? 5 : 2},
      {"hallucination", clean ? 5 : 2},
      {"coherence", 3},
      {"rationale", clean ? "All sentences are grounded in the source fields."
                          : std::to_string(unsupported) +
                                " sentence(s) are not grounded in the source fields."},
      {"claims", claims},
  };
  return out.dump(2);
}

// --- extraction -----------------------------------------------------------

std::string scripted_schema_guess(const json& payload) {
  std::set<std::string> columns;
  for (const auto& report : field(payload, "reports")) {
    for (const auto& claim : template_claims(report.get<std::string>())) {
      columns.insert(claim.column);
    }
  }
  json cols = json::array();
  for (const auto& column : columns) cols.push_back(column);
  return json{{"columns", cols}}.dump(2);
}

std::string scripted_temporal_spotting(const json& payload) {
  const std::string text = field(payload, "text").get<std::string>();
  json mentions = json::array();
  for (const auto& m : extract_temporals(text)) mentions.push_back(m.raw_span);
  return json{{"mentions", mentions}}.dump(2);
}

std::string scripted_kv_extraction(const json& payload) {
  const std::string report = field(payload, "report").get<std::string>();
  std::map<std::string, TemplateClaim> found;
  for (const auto& claim : template_claims(report)) found.emplace(claim.column, claim);

  json kv = json::object();
  for (const auto& c : field(payload, "columns")) {
    const std::string column = c.get<std::string>();
    auto it = found.find(column);
    if (it == found.end() || it->second.value == "unavailable") {
      kv[column] = nullptr;
    } else {
      kv[column] = it->second.value;
    }
  }
  return json{{"kv", kv}}.dump(2);
}

}  // namespace

std::string scripted_complete(const ChatRequest& request) {
  switch (request.response_schema_tag) {
    case SchemaTag::plan: return scripted_plan(payload_of(request));
    case SchemaTag::report: return scripted_report(payload_of(request));
    case SchemaTag::judge: return scripted_judge(payload_of(request));
    case SchemaTag::schema_guess: return scripted_schema_guess(payload_of(request));
    case SchemaTag::kv_extraction: return scripted_kv_extraction(payload_of(request));
    case SchemaTag::temporal_spotting:
      return scripted_temporal_spotting(payload_of(request));
  }
  throw ContractError("scripted backend: unknown schema tag");
}

}  // namespace tabtext
