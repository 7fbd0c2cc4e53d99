#include "tabtext/orchestrator.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "tabtext/artifacts.hpp"
#include "tabtext/errors.hpp"
#include "tabtext/extraction.hpp"
#include "tabtext/matching.hpp"
#include "tabtext/planner.hpp"
#include "tabtext/table.hpp"

namespace tabtext {

using nlohmann::json;

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::plan: return "plan";
    case Stage::generate: return "generate";
    case Stage::validate: return "validate";
    case Stage::judge: return "judge";
    case Stage::filter: return "filter";
    case Stage::extract: return "extract";
    case Stage::score: return "score";
  }
  return "unknown";
}

Stage stage_from_string(std::string_view name) {
  for (Stage stage : kStageOrder) {
    if (to_string(stage) == name) return stage;
  }
  throw ConfigError("unknown stage: " + std::string(name));
}

// ---------------------------------------------------------------------------
// RunConfig

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  RunConfig config;
  config.dataset_dir = j.at("dataset_dir").get<std::string>();
  config.output_dir = j.at("output_dir").get<std::string>();
  config.seed = j.value("seed", 0L);
  config.tau_release = j.value("tau_release", 0.90);
  config.denylist = j.value("denylist", std::vector<std::string>{});
  config.prompt_dir = j.value("prompt_dir", std::string{});
  config.paper_table_style = j.value("paper_table_style", false);
  const std::string temporal_mode = j.value("temporal_mode", std::string("rules"));
  if (temporal_mode == "gateway") {
    config.temporal_mode = TemporalMode::gateway;
  } else if (temporal_mode != "rules") {
    throw ConfigError("unknown temporal_mode: " + temporal_mode);
  }
  config.normalize_values = j.value("normalize_values", false);

  if (j.contains("stages")) {
    for (const auto& s : j.at("stages")) {
      config.stages.push_back(stage_from_string(s.get<std::string>()));
    }
  }

  if (j.contains("backend")) {
    const auto& b = j.at("backend");
    const std::string kind = b.value("kind", "scripted");
    if (kind == "scripted") {
      config.backend.kind = BackendKind::scripted;
    } else if (kind == "http" || kind == "http_openai_compatible") {
      config.backend.kind = BackendKind::http_openai_compatible;
    } else {
      throw ConfigError("unknown backend kind: " + kind);
    }
    if (b.contains("base_url") && !b.at("base_url").is_null()) {
      config.backend.base_url = b.at("base_url").get<std::string>();
    }
    config.backend.model_name = b.value("model_name", std::string("scripted"));
    config.backend.max_in_flight = b.value("max_in_flight", 4);
    config.backend.retry_limit = b.value("retry_limit", 3);
    config.backend.backoff_base =
        std::chrono::milliseconds(b.value("backoff_base_ms", 250));
    config.backend.api_key_env = b.value("api_key_env", std::string("TABTEXT_API_KEY"));
    config.backend.fail_every_n = b.value("fail_every_n", 0);
    config.backend.fail_offset = b.value("fail_offset", 0);
  }

  if (j.contains("filter_policy")) {
    const auto& f = j.at("filter_policy");
    const std::string dim = f.value("dimension", std::string("auto"));
    if (dim == "numeric" || dim == "numeric_precision_recall") {
      config.filter_policy.dimension = Dimension::numeric;
    } else if (dim == "temporal" || dim == "temporal_precision_recall") {
      config.filter_policy.dimension = Dimension::temporal;
    } else if (dim != "auto") {
      throw ConfigError("unknown filter dimension: " + dim);
    }
    config.filter_policy.tau_start = f.value("tau_start", 1.00);
    config.filter_policy.tau_end = f.value("tau_end", 0.70);
    config.filter_policy.tau_step = f.value("tau_step", 0.05);
  }
  config.backend.validate();
  config.filter_policy.validate();
  return config;
}

json RunConfig::to_json() const {
  json stages_json = json::array();
  const auto& list = stages.empty() ? std::vector<Stage>(kStageOrder.begin(), kStageOrder.end())
                                    : stages;
  for (Stage stage : list) stages_json.push_back(std::string(to_string(stage)));

  json dim = "auto";
  if (filter_policy.dimension.has_value()) {
    dim = std::string(to_string(*filter_policy.dimension)) + "_precision_recall";
  }
  return {
      {"dataset_dir", dataset_dir.generic_string()},
      {"output_dir", output_dir.generic_string()},
      {"seed", seed},
      {"stages", stages_json},
      {"tau_release", tau_release},
      {"denylist", denylist},
      {"prompt_dir", prompt_dir.generic_string()},
      {"paper_table_style", paper_table_style},
      {"temporal_mode", temporal_mode == TemporalMode::gateway ? "gateway" : "rules"},
      {"normalize_values", normalize_values},
      {"backend",
       {{"kind", backend.kind == BackendKind::scripted ? "scripted" : "http_openai_compatible"},
        {"base_url", backend.base_url.has_value() ? json(*backend.base_url) : json(nullptr)},
        {"model_name", backend.model_name},
        {"max_in_flight", backend.max_in_flight},
        {"retry_limit", backend.retry_limit},
        {"backoff_base_ms", backend.backoff_base.count()},
        {"api_key_env", backend.api_key_env},
        {"fail_every_n", backend.fail_every_n},
        {"fail_offset", backend.fail_offset}}},
      {"filter_policy",
       {{"dimension", dim},
        {"tau_start", filter_policy.tau_start},
        {"tau_end", filter_policy.tau_end},
        {"tau_step", filter_policy.tau_step}}},
  };
}

std::string RunConfig::config_hash() const { return fnv1a_hex(to_json().dump()); }

bool RunConfig::stage_requested(Stage stage) const {
  if (stages.empty()) return true;
  return std::find(stages.begin(), stages.end(), stage) != stages.end();
}

// ---------------------------------------------------------------------------
// RunManifest

json RunManifest::to_json() const {
  json stages_json = json::object();
  for (const auto& [name, record] : stages) {
    json failures = json::array();
    for (const auto& failure : record.failures) failures.push_back(failure_to_json(failure));
    stages_json[name] = {
        {"status", record.status},     {"counts", record.counts},
        {"failures", failures},        {"warnings", record.warnings},
        {"errors", record.errors},     {"artifacts", record.artifacts},
    };
  }
  return {{"run_id", run_id}, {"config_hash", config_hash}, {"stages", stages_json}};
}

RunManifest RunManifest::from_json(const json& j) {
  RunManifest manifest;
  manifest.run_id = j.value("run_id", "");
  manifest.config_hash = j.value("config_hash", "");
  const json stages_json = j.value("stages", json::object());
  for (const auto& [name, record_json] : stages_json.items()) {
    StageRecord record;
    record.status = record_json.value("status", "");
    record.counts = record_json.value("counts", json::object());
    for (const auto& failure : record_json.value("failures", json::array())) {
      record.failures.push_back(failure_from_json(failure));
    }
    record.warnings = record_json.value("warnings", std::vector<std::string>{});
    record.errors = record_json.value("errors", std::vector<std::string>{});
    record.artifacts = record_json.value("artifacts", std::vector<std::string>{});
    manifest.stages[name] = std::move(record);
  }
  return manifest;
}

// ---------------------------------------------------------------------------
// Stage execution

namespace {

struct StagePaths {
  std::filesystem::path out;

  std::filesystem::path table_dir(const std::string& table_id) const {
    return out / "tables" / table_id;
  }
  std::filesystem::path plan(const std::string& id) const { return table_dir(id) / "plan.json"; }
  std::filesystem::path reports(const std::string& id) const {
    return table_dir(id) / "reports.jsonl";
  }
  std::filesystem::path fidelity(const std::string& id) const {
    return table_dir(id) / "fidelity.jsonl";
  }
  std::filesystem::path judge(const std::string& id) const {
    return table_dir(id) / "judge.jsonl";
  }
  std::filesystem::path schemas(const std::string& id) const {
    return table_dir(id) / "schemas.json";
  }
  std::filesystem::path extraction(const std::string& id) const {
    return table_dir(id) / "extraction.jsonl";
  }
  std::filesystem::path scores(const std::string& id) const {
    return table_dir(id) / "scores.json";
  }
  std::filesystem::path filter_json() const { return out / "filter.json"; }
  std::filesystem::path filter_csv() const { return out / "filter_sweep.csv"; }
  std::filesystem::path manifest() const { return out / "manifest.json"; }
};

std::string relative_to(const std::filesystem::path& path, const std::filesystem::path& root) {
  return std::filesystem::relative(path, root).generic_string();
}

struct RunContext {
  const RunConfig& config;
  StagePaths paths;
  std::vector<TableSpec> tables;  // sorted by table_id
  const Gateway& gateway;
  PromptTemplates templates;
};

std::vector<std::filesystem::path> stage_artifacts(const RunContext& ctx, Stage stage) {
  std::vector<std::filesystem::path> files;
  for (const auto& table : ctx.tables) {
    switch (stage) {
      case Stage::plan: files.push_back(ctx.paths.plan(table.table_id)); break;
      case Stage::generate: files.push_back(ctx.paths.reports(table.table_id)); break;
      case Stage::validate: files.push_back(ctx.paths.fidelity(table.table_id)); break;
      case Stage::judge: files.push_back(ctx.paths.judge(table.table_id)); break;
      case Stage::extract:
        files.push_back(ctx.paths.schemas(table.table_id));
        files.push_back(ctx.paths.extraction(table.table_id));
        break;
      case Stage::score: files.push_back(ctx.paths.scores(table.table_id)); break;
      case Stage::filter: break;
    }
  }
  if (stage == Stage::filter) {
    files.push_back(ctx.paths.filter_json());
    files.push_back(ctx.paths.filter_csv());
  }
  return files;
}

const std::map<Stage, std::vector<Stage>>& stage_dependencies() {
  static const std::map<Stage, std::vector<Stage>> kDeps = {
      {Stage::plan, {}},
      {Stage::generate, {Stage::plan}},
      {Stage::validate, {Stage::generate}},
      {Stage::judge, {Stage::generate}},
      {Stage::filter, {Stage::validate}},
      {Stage::extract, {Stage::generate}},
      {Stage::score, {Stage::extract}},
  };
  return kDeps;
}

ReportPlan load_plan(const RunContext& ctx, const std::string& table_id) {
  return plan_from_json(read_json_file(ctx.paths.plan(table_id)));
}

std::vector<Report> load_reports(const RunContext& ctx, const std::string& table_id) {
  std::vector<Report> reports;
  for (const auto& line : read_jsonl_file(ctx.paths.reports(table_id))) {
    reports.push_back(report_from_json(line));
  }
  return reports;
}

const ReportType* find_type(const ReportPlan& plan, const std::string& name) {
  for (const auto& rtype : plan.report_types) {
    if (rtype.name == name) return &rtype;
  }
  return nullptr;
}

const RowRecord* find_row(const TableSpec& table, int row_id) {
  for (const auto& row : table.rows) {
    if (row.row_id == row_id) return &row;
  }
  return nullptr;
}

StageRecord exec_plan(RunContext& ctx) {
  StageRecord record;
  record.status = "ok";
  int type_count = 0;
  for (const auto& table : ctx.tables) {
    auto samples = sample_rows(table, 10, ctx.config.seed);
    ReportPlan plan = plan_reports(table, samples, ctx.gateway, ctx.templates);
    write_json_file(ctx.paths.plan(table.table_id), plan_to_json(plan));
    for (const auto& warning : plan.warnings) {
      record.warnings.push_back(table.table_id + ": " + warning);
    }
    type_count += static_cast<int>(plan.report_types.size());
  }
  record.counts = {{"tables", ctx.tables.size()}, {"report_types", type_count}};
  return record;
}

StageRecord exec_generate(RunContext& ctx) {
  StageRecord record;
  record.status = "ok";
  long report_count = 0;
  for (const auto& table : ctx.tables) {
    const ReportPlan plan = load_plan(ctx, table.table_id);
    GenerationResult result = generate_all(table, plan, ctx.gateway, ctx.templates);
    std::vector<json> lines;
    lines.reserve(result.reports.size());
    for (const auto& report : result.reports) lines.push_back(report_to_json(report));
    write_jsonl_file(ctx.paths.reports(table.table_id), lines);

    report_count += static_cast<long>(result.reports.size());
    for (auto& failure : result.failures) record.failures.push_back(std::move(failure));
    for (auto& warning : result.warnings) {
      record.warnings.push_back(table.table_id + ": " + warning);
    }
    for (const auto& aborted : result.aborted_types) {
      record.status = "error";
      record.errors.push_back(table.table_id + ": report type '" + aborted +
                              "' exceeded the 10% generation failure budget");
    }
  }
  record.counts = {{"reports", report_count},
                   {"failures", record.failures.size()}};
  return record;
}

StageRecord exec_validate(RunContext& ctx) {
  StageRecord record;
  record.status = "ok";
  long validated = 0;
  for (const auto& table : ctx.tables) {
    const ReportPlan plan = load_plan(ctx, table.table_id);
    std::vector<json> lines;
    for (const auto& report : load_reports(ctx, table.table_id)) {
      const ReportType* rtype = find_type(plan, report.report_type_name);
      const RowRecord* row = find_row(table, report.row_id);
      if (rtype == nullptr || row == nullptr) {
        record.failures.push_back({"validate", table.table_id, report.report_type_name,
                                   report.row_id, "report does not match plan or table"});
        continue;
      }
      MentionSets extracted;
      if (ctx.config.temporal_mode == TemporalMode::gateway) {
        extracted.temporals =
            extract_temporals_via_gateway(report.text, ctx.gateway, ctx.templates);
        extracted.numerics = extract_numerics(report.text, extracted.temporals);
      } else {
        extracted = scan_text(report.text);
      }
      FidelityResult result = validate_report_with(*row, rtype->columns,
                                                   report.report_type_name, extracted);
      lines.push_back(fidelity_to_json(result));
      ++validated;
    }
    write_jsonl_file(ctx.paths.fidelity(table.table_id), lines);
  }
  record.counts = {{"reports", validated}};
  return record;
}

StageRecord exec_judge(RunContext& ctx) {
  StageRecord record;
  record.status = "ok";
  long judged = 0;
  for (const auto& table : ctx.tables) {
    const ReportPlan plan = load_plan(ctx, table.table_id);
    const std::vector<Report> reports = load_reports(ctx, table.table_id);

    std::vector<std::optional<JudgeScore>> scores(reports.size());
    std::vector<std::optional<FailureEntry>> failures(reports.size());
    parallel_for_indexed(reports.size(), ctx.gateway.config().max_in_flight,
                         [&](std::size_t i) {
                           const Report& report = reports[i];
                           const ReportType* rtype = find_type(plan, report.report_type_name);
                           const RowRecord* row = find_row(table, report.row_id);
                           if (rtype == nullptr || row == nullptr) {
                             failures[i] = FailureEntry{"judge", table.table_id,
                                                        report.report_type_name, report.row_id,
                                                        "report does not match plan or table"};
                             return;
                           }
                           try {
                             scores[i] = judge_report(report, *row, *rtype, ctx.gateway,
                                                      ctx.templates);
                           } catch (const Error& e) {
                             failures[i] = FailureEntry{"judge", table.table_id,
                                                        report.report_type_name, report.row_id,
                                                        e.what()};
                           }
                         });

    std::vector<json> lines;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (scores[i]) {
        lines.push_back(judge_score_to_json(*scores[i]));
        ++judged;
      } else if (failures[i]) {
        record.failures.push_back(*failures[i]);
      }
    }
    write_jsonl_file(ctx.paths.judge(table.table_id), lines);
  }
  record.counts = {{"scores", judged}, {"failures", record.failures.size()}};
  return record;
}

json macro_to_json(const std::optional<DimensionMacro>& macro) {
  if (!macro) return nullptr;
  return {{"precision", macro->precision},
          {"recall", macro->recall},
          {"f1", macro->f1},
          {"min_pr", macro->min_pr}};
}

StageRecord exec_filter(RunContext& ctx) {
  StageRecord record;
  record.status = "ok";

  // Pool fidelity results across tables; report types get a table prefix so
  // ids stay unique dataset-wide.
  std::vector<FidelityResult> pooled;
  for (const auto& table : ctx.tables) {
    for (const auto& line : read_jsonl_file(ctx.paths.fidelity(table.table_id))) {
      FidelityResult result = fidelity_from_json(line);
      result.report_type = table.table_id + "/" + result.report_type;
      pooled.push_back(std::move(result));
    }
  }
  if (pooled.empty()) throw FilterError("no fidelity results to filter");

  const Dimension dimension =
      ctx.config.filter_policy.dimension.value_or(select_weakest_dimension(pooled));
  FilterPolicy policy = ctx.config.filter_policy;
  policy.dimension = dimension;

  const std::vector<FilterOutcome> outcomes = sweep(pooled, policy);
  const FilterOutcome release = apply_threshold(pooled, dimension, ctx.config.tau_release);

  json sweep_json = json::array();
  std::string csv =
      "tau,retention_fraction,numeric_precision,numeric_recall,numeric_f1,numeric_min_pr,"
      "temporal_precision,temporal_recall,temporal_f1,temporal_min_pr\n";
  char buf[256];
  for (const auto& outcome : outcomes) {
    sweep_json.push_back({{"tau", outcome.tau},
                          {"retention_fraction", outcome.retention_fraction},
                          {"retained", outcome.retained_ids.size()},
                          {"numeric", macro_to_json(outcome.numeric)},
                          {"temporal", macro_to_json(outcome.temporal)}});
    auto cell = [&](const std::optional<DimensionMacro>& m, double DimensionMacro::*field) {
      if (!m) return std::string("");
      std::snprintf(buf, sizeof(buf), "%.6f", (*m).*field);
      return std::string(buf);
    };
    std::snprintf(buf, sizeof(buf), "%.2f,%.6f", outcome.tau, outcome.retention_fraction);
    csv += buf;
    for (auto field : {&DimensionMacro::precision, &DimensionMacro::recall, &DimensionMacro::f1,
                       &DimensionMacro::min_pr}) {
      csv += "," + cell(outcome.numeric, field);
    }
    for (auto field : {&DimensionMacro::precision, &DimensionMacro::recall, &DimensionMacro::f1,
                       &DimensionMacro::min_pr}) {
      csv += "," + cell(outcome.temporal, field);
    }
    csv += "\n";
  }

  json retained_json = json::array();
  for (const auto& [row_id, report_type] : release.retained_ids) {
    retained_json.push_back({{"row_id", row_id}, {"report_type", report_type}});
  }
  write_json_file(ctx.paths.filter_json(),
                  {{"dimension", std::string(to_string(dimension)) + "_precision_recall"},
                   {"tau_release", ctx.config.tau_release},
                   {"release_retention_fraction", release.retention_fraction},
                   {"release_retained_ids", retained_json},
                   {"sweep", sweep_json}});
  write_text_file(ctx.paths.filter_csv(), csv);

  record.counts = {{"reports", pooled.size()},
                   {"outcomes", outcomes.size()},
                   {"dimension", std::string(to_string(dimension))},
                   {"release_retained", release.retained_ids.size()}};
  return record;
}

StageRecord exec_extract(RunContext& ctx) {
  StageRecord record;
  record.status = "ok";
  long extracted = 0;
  for (const auto& table : ctx.tables) {
    const std::vector<Report> reports = load_reports(ctx, table.table_id);

    // Group by report type, preserving the artifact's type order.
    std::vector<std::string> type_order;
    std::map<std::string, std::vector<Report>> by_type;
    for (const auto& report : reports) {
      if (by_type.find(report.report_type_name) == by_type.end()) {
        type_order.push_back(report.report_type_name);
      }
      by_type[report.report_type_name].push_back(report);
    }

    json schemas_json = json::array();
    std::vector<json> extraction_lines;
    for (const auto& type_name : type_order) {
      const std::vector<Report>& type_reports = by_type[type_name];
      PredictedSchema schema;
      try {
        schema = infer_schema(type_reports, ctx.gateway, ctx.templates);
      } catch (const Error& e) {
        record.status = "error";
        record.errors.push_back(table.table_id + "/" + type_name + ": " + e.what());
        continue;
      }
      schemas_json.push_back(schema_to_json(schema));

      std::vector<std::optional<ExtractionResult>> results(type_reports.size());
      std::vector<std::optional<FailureEntry>> failures(type_reports.size());
      parallel_for_indexed(type_reports.size(), ctx.gateway.config().max_in_flight,
                           [&](std::size_t i) {
                             try {
                               results[i] = extract_row(type_reports[i], schema, ctx.gateway,
                                                        ctx.templates);
                             } catch (const Error& e) {
                               failures[i] = FailureEntry{"extract", table.table_id, type_name,
                                                          type_reports[i].row_id, e.what()};
                             }
                           });
      for (std::size_t i = 0; i < type_reports.size(); ++i) {
        if (results[i]) {
          extraction_lines.push_back(extraction_to_json(*results[i]));
          ++extracted;
        } else if (failures[i]) {
          record.failures.push_back(*failures[i]);
        }
      }
    }
    write_json_file(ctx.paths.schemas(table.table_id), schemas_json);
    write_jsonl_file(ctx.paths.extraction(table.table_id), extraction_lines);
  }
  record.counts = {{"rows", extracted}, {"failures", record.failures.size()}};
  return record;
}

json match_score_to_json(const MatchScore& score) {
  return {{"precision", score.precision},
          {"recall", score.recall},
          {"f1", score.f1.has_value() ? json(*score.f1) : json(nullptr)},
          {"precision_support", score.precision_support},
          {"recall_support", score.recall_support},
          {"undefined_precision", score.undefined_precision}};
}

StageRecord exec_score(RunContext& ctx) {
  StageRecord record;
  record.status = "ok";
  long types_scored = 0;
  for (const auto& table : ctx.tables) {
    const ReportPlan plan = load_plan(ctx, table.table_id);
    std::map<std::string, PredictedSchema> schemas;
    for (const auto& entry : read_json_file(ctx.paths.schemas(table.table_id))) {
      PredictedSchema schema = schema_from_json(entry);
      schemas[schema.report_type_name] = std::move(schema);
    }
    std::map<std::string, std::vector<RowExtraction>> extractions;
    for (const auto& line : read_jsonl_file(ctx.paths.extraction(table.table_id))) {
      ExtractionResult result = extraction_from_json(line);
      extractions[result.report_type_name].push_back({result.row_id, std::move(result.kv)});
    }

    json per_type = json::array();
    for (const auto& rtype : plan.report_types) {
      auto schema_it = schemas.find(rtype.name);
      if (schema_it == schemas.end()) continue;  // extraction skipped this type
      const ColumnAssignment assignment =
          assign_columns(rtype.columns, schema_it->second.columns);
      const MatchScore column_score = score_columns(assignment);
      const MatchScore value_score =
          score_values(assignment, extractions[rtype.name], table,
                       ctx.config.normalize_values ? ValueComparison::normalized
                                                   : ValueComparison::surface);

      json pairs = json::array();
      for (const auto& pair : assignment.pairs) {
        pairs.push_back({{"gt", pair.gt_column},
                         {"predicted", pair.predicted_column},
                         {"similarity", pair.similarity}});
      }
      per_type.push_back({{"report_type", rtype.name},
                          {"column_score", match_score_to_json(column_score)},
                          {"value_score", match_score_to_json(value_score)},
                          {"assignment",
                           {{"pairs", pairs},
                            {"unmatched_gt", assignment.unmatched_gt},
                            {"unmatched_predicted", assignment.unmatched_predicted},
                            {"total_similarity", assignment.total_similarity}}},
                          {"rows_scored", extractions[rtype.name].size()}});
      ++types_scored;
    }
    write_json_file(ctx.paths.scores(table.table_id), per_type);
  }
  record.counts = {{"report_types", types_scored}};
  return record;
}

StageRecord execute_stage(RunContext& ctx, Stage stage) {
  switch (stage) {
    case Stage::plan: return exec_plan(ctx);
    case Stage::generate: return exec_generate(ctx);
    case Stage::validate: return exec_validate(ctx);
    case Stage::judge: return exec_judge(ctx);
    case Stage::filter: return exec_filter(ctx);
    case Stage::extract: return exec_extract(ctx);
    case Stage::score: return exec_score(ctx);
  }
  throw StageError("unknown stage");
}

std::vector<TableSpec> load_dataset(const RunConfig& config) {
  if (!std::filesystem::is_directory(config.dataset_dir)) {
    throw IngestError("dataset_dir does not exist: " + config.dataset_dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(config.dataset_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw IngestError("dataset_dir has no CSV tables: " + config.dataset_dir.string());
  }
  std::vector<TableSpec> tables;
  tables.reserve(files.size());
  for (const auto& file : files) tables.push_back(load_table(file, config.denylist));
  return tables;
}

}  // namespace

RunManifest run(const RunConfig& config) {
  const std::string hash = config.config_hash();
  StagePaths paths{config.output_dir};
  std::filesystem::create_directories(config.output_dir);

  Gateway gateway(config.backend);
  PromptTemplates templates = config.prompt_dir.empty()
                                  ? PromptTemplates::defaults()
                                  : PromptTemplates::load(config.prompt_dir);
  RunContext ctx{config, paths, load_dataset(config), gateway, std::move(templates)};

  // Previous manifest records survive only under the same config hash.
  RunManifest manifest;
  manifest.run_id = "run-" + hash.substr(0, 12);
  manifest.config_hash = hash;
  if (std::filesystem::exists(paths.manifest())) {
    RunManifest previous = RunManifest::from_json(read_json_file(paths.manifest()));
    if (previous.config_hash == hash) manifest.stages = std::move(previous.stages);
  }

  std::set<Stage> executed;
  auto upstream_executed = [&](Stage stage) {
    // transitive closure over the dependency map
    std::vector<Stage> work = stage_dependencies().at(stage);
    std::set<Stage> seen;
    while (!work.empty()) {
      Stage dep = work.back();
      work.pop_back();
      if (!seen.insert(dep).second) continue;
      if (executed.count(dep)) return true;
      for (Stage d : stage_dependencies().at(dep)) work.push_back(d);
    }
    return false;
  };

  for (Stage stage : kStageOrder) {
    if (!config.stage_requested(stage)) continue;

    for (Stage dep : stage_dependencies().at(stage)) {
      for (const auto& artifact : stage_artifacts(ctx, dep)) {
        if (!std::filesystem::exists(artifact)) {
          write_json_file(paths.manifest(), manifest.to_json());
          throw DependencyError("stage '" + std::string(to_string(stage)) +
                                "' needs missing artifact of stage '" +
                                std::string(to_string(dep)) + "': " + artifact.string());
        }
      }
    }

    const std::string name(to_string(stage));
    const auto existing = manifest.stages.find(name);
    const bool artifacts_present = [&] {
      const auto files = stage_artifacts(ctx, stage);
      return std::all_of(files.begin(), files.end(), [](const std::filesystem::path& f) {
        return std::filesystem::exists(f);
      });
    }();
    if (existing != manifest.stages.end() && existing->second.status == "ok" &&
        artifacts_present && !upstream_executed(stage)) {
      continue;  // fresh: keep the previous record byte-for-byte
    }

    StageRecord record;
    try {
      record = execute_stage(ctx, stage);
    } catch (const Error& e) {
      record.status = "error";
      record.errors.push_back(e.what());
      manifest.stages[name] = std::move(record);
      write_json_file(paths.manifest(), manifest.to_json());
      throw;
    }
    for (const auto& artifact : stage_artifacts(ctx, stage)) {
      record.artifacts.push_back(relative_to(artifact, config.output_dir));
    }
    manifest.stages[name] = std::move(record);
    executed.insert(stage);
  }

  write_json_file(paths.manifest(), manifest.to_json());
  emit_summary(config);
  return manifest;
}

}  // namespace tabtext
