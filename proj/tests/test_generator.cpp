#include <doctest.h>

#include <set>

#include "support.hpp"
#include "tabtext/artifacts.hpp"
#include "tabtext/generator.hpp"

using namespace tabtext;
using tabtext::testing::make_table;
using tabtext::testing::scripted_config;

namespace {

ReportPlan two_type_plan() {
  ReportPlan plan;
  plan.table_id = "t";
  plan.report_types = {{"ab report", {"a", "b"}}, {"c report", {"c"}}};
  return plan;
}

}  // namespace

TEST_CASE("template generation states values and unavailability") {
  const TableSpec table = make_table("t", {"a", "b"}, {{"1", nullptr}});
  Gateway gateway(scripted_config());
  const GeneratedReport generated = generate_report(
      table.rows[0], {"ab report", {"a", "b"}}, gateway, PromptTemplates::defaults(), "t");
  CHECK(generated.report.text ==
        "The a of this record is 1. The b of this record is unavailable.");
  CHECK_FALSE(generated.warning.has_value());
  CHECK(generated.report.generation_backend == "scripted");
}

TEST_CASE("an all-null selection yields the placeholder and a warning") {
  const TableSpec table = make_table("t", {"a", "b"}, {{nullptr, nullptr}});
  Gateway gateway(scripted_config());
  const GeneratedReport generated = generate_report(
      table.rows[0], {"ab report", {"a", "b"}}, gateway, PromptTemplates::defaults(), "t");
  CHECK(generated.report.text == std::string(kEmptyRowPlaceholder));
  REQUIRE(generated.warning.has_value());
  CHECK(generated.warning->find("placeholder") != std::string::npos);
}

TEST_CASE("generate_all produces rows x types reports") {
  const TableSpec table =
      make_table("t", {"a", "b", "c"},
                 {{"1", "2", "3"}, {"4", "5", "6"}, {"7", "8", "9"}});
  Gateway gateway(scripted_config());
  const GenerationResult result =
      generate_all(table, two_type_plan(), gateway, PromptTemplates::defaults());
  CHECK(result.reports.size() == 6);
  CHECK(result.failures.empty());
  CHECK(result.aborted_types.empty());
}

TEST_CASE("scripted reruns are byte-identical") {
  const TableSpec table = make_table("t", {"a", "b", "c"}, {{"1", "2", "3"}, {"4", nullptr, "6"}});
  Gateway gateway(scripted_config());
  auto render = [&] {
    std::string out;
    for (const auto& report :
         generate_all(table, two_type_plan(), gateway, PromptTemplates::defaults()).reports) {
      out += report_to_json(report).dump() + "\n";
    }
    return out;
  };
  CHECK(render() == render());
}

TEST_CASE("fault injection: 1 failure in 20 calls, count identity holds") {
  std::vector<std::vector<const char*>> rows;
  std::vector<std::string> values;
  for (int i = 0; i < 20; ++i) values.push_back("v" + std::to_string(i));
  for (int i = 0; i < 20; ++i) rows.push_back({values[i].c_str()});
  const TableSpec table = make_table("t", {"a"}, rows);

  BackendConfig cfg = scripted_config();
  cfg.fail_every_n = 20;
  cfg.fail_offset = 7;
  cfg.retry_limit = 2;
  cfg.max_in_flight = 1;  // keep the request sequence aligned with row order
  Gateway gateway(cfg);

  ReportPlan plan;
  plan.table_id = "t";
  plan.report_types = {{"a report", {"a"}}};
  const GenerationResult result =
      generate_all(table, plan, gateway, PromptTemplates::defaults());
  CHECK(result.reports.size() == 19);
  REQUIRE(result.failures.size() == 1);
  CHECK(result.reports.size() + result.failures.size() ==
        table.rows.size() * plan.report_types.size());
  CHECK(result.failures[0].stage == "generate");
  CHECK(result.failures[0].row_id == 7);
  CHECK(result.aborted_types.empty());  // 5% is within the budget
}

TEST_CASE("a report type exceeding the 10% failure budget is aborted") {
  std::vector<std::vector<const char*>> rows;
  std::vector<std::string> values;
  for (int i = 0; i < 10; ++i) values.push_back("v" + std::to_string(i));
  for (int i = 0; i < 10; ++i) rows.push_back({values[i].c_str()});
  const TableSpec table = make_table("t", {"a"}, rows);

  BackendConfig cfg = scripted_config();
  cfg.fail_every_n = 2;  // 50% failures
  cfg.retry_limit = 1;
  cfg.max_in_flight = 1;
  Gateway gateway(cfg);

  ReportPlan plan;
  plan.table_id = "t";
  plan.report_types = {{"a report", {"a"}}};
  const GenerationResult result =
      generate_all(table, plan, gateway, PromptTemplates::defaults());
  REQUIRE(result.aborted_types.size() == 1);
  CHECK(result.aborted_types[0] == "a report");
  CHECK(result.reports.size() + result.failures.size() == 10);
}

TEST_CASE("grounding closure: selected values verbatim, others absent") {
  const TableSpec table = make_table(
      "t", {"picked_one", "picked_two", "left_out"},
      {{"alpha-11", "beta-22", "gamma-33"}, {"delta-44", nullptr, "epsilon-55"}});
  Gateway gateway(scripted_config());
  const ReportType rtype{"picked report", {"picked_one", "picked_two"}};
  for (const auto& row : table.rows) {
    const GeneratedReport generated =
        generate_report(row, rtype, gateway, PromptTemplates::defaults(), "t");
    for (const auto& column : rtype.columns) {
      const auto& cell = row.cell(column);
      if (cell.has_value()) {
        CHECK(generated.report.text.find(*cell) != std::string::npos);
      }
    }
    const auto& excluded = row.cell("left_out");
    REQUIRE(excluded.has_value());
    CHECK(generated.report.text.find(*excluded) == std::string::npos);
  }
}
