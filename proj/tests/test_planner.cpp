#include <doctest.h>

#include <set>

#include "support.hpp"
#include "tabtext/errors.hpp"
#include "tabtext/planner.hpp"

using namespace tabtext;
using tabtext::testing::CannedServer;
using tabtext::testing::make_table;
using tabtext::testing::scripted_config;

namespace {

TableSpec hundred_rows() {
  std::vector<std::vector<const char*>> rows;
  std::vector<std::string> values(100);
  for (int i = 0; i < 100; ++i) {
    values[i] = "v" + std::to_string(i);
    rows.push_back({values[i].c_str()});
  }
  return make_table("big", {"a"}, rows);
}

}  // namespace

TEST_CASE("sampling a small table returns every row") {
  const TableSpec table = make_table("t", {"a"}, {{"1"}, {"2"}, {"3"}});
  const auto samples = sample_rows(table, 10, 7);
  REQUIRE(samples.size() == 3);
  CHECK(samples[0].row_id == 0);
  CHECK(samples[2].row_id == 2);
}

TEST_CASE("sampling is deterministic for a fixed seed") {
  const TableSpec table = hundred_rows();
  const auto first = sample_rows(table, 10, 7);
  const auto second = sample_rows(table, 10, 7);
  REQUIRE(first.size() == 10);
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].row_id == second[i].row_id);
  }
}

TEST_CASE("samples are distinct and in range across many seeds") {
  const TableSpec table = hundred_rows();
  for (long seed = 0; seed < 50; ++seed) {
    const auto samples = sample_rows(table, 10, seed);
    REQUIRE(samples.size() == 10);
    std::set<int> ids;
    for (const auto& row : samples) {
      CHECK(row.row_id >= 0);
      CHECK(row.row_id < 100);
      CHECK(ids.insert(row.row_id).second);
    }
  }
}

TEST_CASE("sampling an empty table is a planning error") {
  TableSpec empty;
  empty.table_id = "empty";
  CHECK_THROWS_AS(sample_rows(empty, 10, 1), PlanningError);
}

TEST_CASE("scripted planner groups suffix roles with their base metric") {
  const TableSpec table =
      make_table("t", {"x_value", "x_date", "y"}, {{"1", "12/31/24", "a"}});
  Gateway gateway(scripted_config());
  const ReportPlan plan =
      plan_reports(table, sample_rows(table, 10, 1), gateway, PromptTemplates::defaults());
  REQUIRE(plan.report_types.size() == 2);
  CHECK(plan.report_types[0].name == "x report");
  CHECK(plan.report_types[0].columns == std::vector<std::string>{"x_value", "x_date"});
  CHECK(plan.report_types[1].columns == std::vector<std::string>{"y"});
}

TEST_CASE("scripted planner caps wide tables at five report types") {
  const TableSpec table = make_table(
      "wide", {"a", "b", "c", "d", "e", "f", "g", "h"},
      {{"1", "2", "3", "4", "5", "6", "7", "8"}});
  Gateway gateway(scripted_config());
  const ReportPlan plan =
      plan_reports(table, sample_rows(table, 10, 1), gateway, PromptTemplates::defaults());
  CHECK(plan.report_types.size() == 5);
  std::set<std::string> covered;
  for (const auto& rtype : plan.report_types) {
    for (const auto& column : rtype.columns) covered.insert(column);
  }
  CHECK(covered.size() == 8);  // every column still planned
}

TEST_CASE("planning is reproducible under the scripted backend") {
  const TableSpec table =
      make_table("t", {"m_value", "m_unit", "k"}, {{"5", "USD", "x"}, {"6", "USD", "y"}});
  Gateway gateway(scripted_config());
  const auto samples = sample_rows(table, 10, 42);
  const auto a = plan_to_json(plan_reports(table, samples, gateway, PromptTemplates::defaults()));
  const auto b = plan_to_json(plan_reports(table, samples, gateway, PromptTemplates::defaults()));
  CHECK(a.dump() == b.dump());
}

TEST_CASE("a plan with more than five types is rejected") {
  nlohmann::json types = nlohmann::json::array();
  for (int i = 0; i < 7; ++i) {
    types.push_back({{"name", "t" + std::to_string(i)}, {"columns", {"a"}}});
  }
  CannedServer canned({nlohmann::json{{"report_types", types}}.dump()});
  Gateway gateway(canned.config());
  const TableSpec table = make_table("t", {"a"}, {{"1"}});
  CHECK_THROWS_AS(
      plan_reports(table, sample_rows(table, 10, 1), gateway, PromptTemplates::defaults()),
      PlanningError);
}

TEST_CASE("unknown proposed columns are dropped with warnings") {
  CannedServer canned({nlohmann::json{
      {"report_types",
       {{{"name", "only"}, {"columns", {"a", "ghost", "b"}}}}}}.dump()});
  Gateway gateway(canned.config());
  const TableSpec table = make_table("t", {"a", "b"}, {{"1", "2"}});
  const ReportPlan plan =
      plan_reports(table, sample_rows(table, 10, 1), gateway, PromptTemplates::defaults());
  REQUIRE(plan.report_types.size() == 1);
  CHECK(plan.report_types[0].columns == std::vector<std::string>{"a", "b"});
  REQUIRE(plan.warnings.size() == 1);
  CHECK(plan.warnings[0].find("ghost") != std::string::npos);
}

TEST_CASE("a plan whose columns are all invalid is a planning error") {
  CannedServer canned({nlohmann::json{
      {"report_types", {{{"name", "only"}, {"columns", {"ghost", "phantom"}}}}}}.dump()});
  Gateway gateway(canned.config());
  const TableSpec table = make_table("t", {"a"}, {{"1"}});
  CHECK_THROWS_AS(
      plan_reports(table, sample_rows(table, 10, 1), gateway, PromptTemplates::defaults()),
      PlanningError);
}

TEST_CASE("an unparseable plan falls back to one re-ask, then errors") {
  CannedServer canned({"not json at all", "still not json"});
  Gateway gateway(canned.config());
  const TableSpec table = make_table("t", {"a"}, {{"1"}});
  CHECK_THROWS_AS(
      plan_reports(table, sample_rows(table, 10, 1), gateway, PromptTemplates::defaults()),
      PlanningError);
  CHECK(canned.hits.load() == 2);

  CannedServer recovers(
      {"garbage", nlohmann::json{{"report_types",
                                  {{{"name", "only"}, {"columns", {"a"}}}}}}.dump()});
  Gateway gateway2(recovers.config());
  const ReportPlan plan = plan_reports(table, sample_rows(table, 10, 1), gateway2,
                                       PromptTemplates::defaults());
  CHECK(plan.report_types.size() == 1);
  CHECK(recovers.hits.load() == 2);
}

TEST_CASE("plan JSON round-trips") {
  ReportPlan plan;
  plan.table_id = "t";
  plan.sample_row_ids = {0, 2, 5};
  plan.report_types = {{"x report", {"x_value", "x_date"}}, {"y report", {"y"}}};
  const ReportPlan back = plan_from_json(plan_to_json(plan));
  CHECK(back.table_id == plan.table_id);
  CHECK(back.sample_row_ids == plan.sample_row_ids);
  REQUIRE(back.report_types.size() == 2);
  CHECK(back.report_types[0].columns == plan.report_types[0].columns);
}
