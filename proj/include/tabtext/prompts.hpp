#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace tabtext {

/// Prompt texts for every gateway-backed stage. Defaults are compiled in;
/// any file present in a template directory overrides its slot.
struct PromptTemplates {
  std::string plan;
  std::string report;
  std::string judge;
  std::string rubric;
  std::string schema_guess;
  std::string kv_extraction;
  std::string temporal_spotting;

  static const PromptTemplates& defaults();
  static PromptTemplates load(const std::filesystem::path& dir);
};

/// Replace {{name}} placeholders; unknown placeholders are left intact.
std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& vars);

/// Append the machine-readable payload that scripted backends (and models
/// asked for grounded output) consume.
std::string attach_data_block(std::string_view prompt_body, const nlohmann::json& payload);

/// The payload of the last ```json fenced block in a prompt, if any.
std::optional<std::string> find_data_block(std::string_view prompt);

/// Parse model output that should be JSON: strips code fences and tolerates
/// prose around the outermost object.
std::optional<nlohmann::json> parse_lenient_json(std::string_view text);

}  // namespace tabtext
