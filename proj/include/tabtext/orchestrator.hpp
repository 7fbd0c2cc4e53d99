#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tabtext/filter.hpp"
#include "tabtext/gateway.hpp"
#include "tabtext/generator.hpp"

namespace tabtext {

enum class Stage { plan, generate, validate, judge, filter, extract, score };

inline constexpr std::array<Stage, 7> kStageOrder = {
    Stage::plan,   Stage::generate, Stage::validate, Stage::judge,
    Stage::filter, Stage::extract,  Stage::score};

std::string_view to_string(Stage stage);
Stage stage_from_string(std::string_view name);

// How the validate stage extracts temporal mentions from report text.
// The rule-based scanner is authoritative; gateway mode asks the model to
// spot spans first and canonicalizes them with the same rules.
enum class TemporalMode { rules, gateway };

struct RunConfig {
  std::filesystem::path dataset_dir;
  std::filesystem::path output_dir;
  BackendConfig backend;
  long seed = 0;
  std::vector<Stage> stages;  // empty means all stages
  FilterPolicy filter_policy;
  double tau_release = 0.90;
  std::vector<std::string> denylist;
  std::filesystem::path prompt_dir;  // empty: compiled-in templates
  bool paper_table_style = false;    // print "--" for value-extraction F1
  TemporalMode temporal_mode = TemporalMode::rules;
  bool normalize_values = false;  // opt-in normalized value comparison

  static RunConfig from_file(const std::filesystem::path& path);
  nlohmann::json to_json() const;
  /// FNV-1a over the canonical serialized config; changes iff a field does.
  std::string config_hash() const;
  bool stage_requested(Stage stage) const;
};

struct StageRecord {
  std::string status;  // "ok" or "error"
  nlohmann::json counts = nlohmann::json::object();
  std::vector<FailureEntry> failures;
  std::vector<std::string> warnings;
  std::vector<std::string> errors;
  std::vector<std::string> artifacts;  // paths relative to output_dir
};

struct RunManifest {
  std::string run_id;
  std::string config_hash;
  std::map<std::string, StageRecord> stages;  // keyed by stage name

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

/// Execute the requested stages in dependency order over every CSV in
/// dataset_dir. Stages whose artifacts are fresh for this config hash are
/// skipped; the manifest and a summary are written either way.
RunManifest run(const RunConfig& config);

/// Rebuild summary.json / summary.txt from whatever artifacts exist.
void emit_summary(const RunConfig& config);

}  // namespace tabtext
