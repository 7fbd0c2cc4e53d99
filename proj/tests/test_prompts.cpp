#include <doctest.h>

#include <fstream>

#include "support.hpp"
#include "tabtext/fidelity.hpp"
#include "tabtext/matching.hpp"
#include "tabtext/prompts.hpp"

using namespace tabtext;
using tabtext::testing::scripted_config;

TEST_CASE("lenient JSON parsing strips fences and trailing prose") {
  const auto fenced = parse_lenient_json("```json\n{\"a\": 1}\n```");
  REQUIRE(fenced.has_value());
  CHECK(fenced->at("a") == 1);

  const auto untagged = parse_lenient_json("```\n{\"a\": 2}\n```");
  REQUIRE(untagged.has_value());
  CHECK(untagged->at("a") == 2);

  const auto prose = parse_lenient_json("Sure! Here is the JSON: {\"a\": 3} Hope it helps.");
  REQUIRE(prose.has_value());
  CHECK(prose->at("a") == 3);

  CHECK_FALSE(parse_lenient_json("no json at all").has_value());
  CHECK_FALSE(parse_lenient_json("{broken").has_value());
}

TEST_CASE("template rendering substitutes known placeholders only") {
  const std::string out = render_template("a {{x}} b {{missing}} c", {{"x", "X"}});
  CHECK(out == "a X b {{missing}} c");
}

TEST_CASE("data blocks round-trip through a prompt") {
  const nlohmann::json payload = {{"k", "v"}};
  const std::string prompt = attach_data_block("Do the thing.\n", payload);
  const auto block = find_data_block(prompt);
  REQUIRE(block.has_value());
  CHECK(nlohmann::json::parse(*block) == payload);
  CHECK_FALSE(find_data_block("no block").has_value());
}

TEST_CASE("template files override compiled-in defaults slot by slot") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "tabtext_prompts";
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "report.txt");
    out << "custom report prompt {{report_type}}";
  }
  const PromptTemplates t = PromptTemplates::load(dir);
  CHECK(t.report == "custom report prompt {{report_type}}");
  CHECK(t.plan == PromptTemplates::defaults().plan);  // untouched slot
  fs::remove_all(dir);
}

TEST_CASE("gateway-backed temporal mode agrees with the rule-based scanner") {
  Gateway gateway(scripted_config());
  for (const char* text :
       {"period ending 12/31/24, filed 2/6/25, covering fiscal year 2024",
        "launched September 29, 2018 and again in Q4 2022",
        "nothing temporal in here"}) {
    const auto via_gateway =
        extract_temporals_via_gateway(text, gateway, PromptTemplates::defaults());
    const auto rule_based = extract_temporals(text);
    REQUIRE(via_gateway.size() == rule_based.size());
    for (std::size_t i = 0; i < rule_based.size(); ++i) {
      CHECK(via_gateway[i].canonical == rule_based[i].canonical);
      CHECK(via_gateway[i].kind == rule_based[i].kind);
      CHECK(via_gateway[i].begin == rule_based[i].begin);
      CHECK(via_gateway[i].end == rule_based[i].end);
    }
  }
}

TEST_CASE("gateway temporal mode drops spans the canonicalizer rejects") {
  tabtext::testing::CannedServer canned({nlohmann::json{
      {"mentions", {"12/31/24", "not a date", "2/6/25"}}}.dump()});
  Gateway gateway(canned.config());
  const auto mentions = extract_temporals_via_gateway(
      "ending 12/31/24 and not a date then 2/6/25", gateway, PromptTemplates::defaults());
  REQUIRE(mentions.size() == 2);
  CHECK(mentions[0].canonical == "2024-12-31");
  CHECK(mentions[1].canonical == "2025-02-06");
}

TEST_CASE("normalized value comparison is an opt-in that forgives notation") {
  TableSpec table;
  table.table_id = "t";
  table.columns = {{"revenue", ColumnKind::numeric}, {"when", ColumnKind::temporal}};
  RowRecord row;
  row.row_id = 0;
  row.cells["revenue"] = "2.65595E+11";
  row.cells["when"] = "9/29/18";
  table.rows = {row};

  const ColumnAssignment assignment =
      assign_columns({"revenue", "when"}, {"revenue", "when"});
  const std::vector<RowExtraction> rows = {
      {0, {{"revenue", "$265,595,000,000"}, {"when", "September 29, 2018"}}}};

  const MatchScore surface = score_values(assignment, rows, table);
  CHECK(surface.precision < 0.5);
  const MatchScore normalized =
      score_values(assignment, rows, table, ValueComparison::normalized);
  CHECK(normalized.precision == doctest::Approx(1.0));
  CHECK(normalized.recall == doctest::Approx(1.0));
}

TEST_CASE("a custom similarity measure plugs into the assignment") {
  const NameSimilarityFn coarse = [](std::string_view a, std::string_view b) {
    return a.substr(0, 1) == b.substr(0, 1) ? 1.0 : 0.0;
  };
  const ColumnAssignment assignment =
      assign_columns({"alpha", "beta"}, {"arc", "bolt"}, coarse);
  REQUIRE(assignment.pairs.size() == 2);
  CHECK(assignment.pairs[0].predicted_column == "arc");
  CHECK(assignment.pairs[1].predicted_column == "bolt");
  CHECK(assignment.total_similarity == doctest::Approx(2.0));
}
