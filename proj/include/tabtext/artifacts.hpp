#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tabtext/extraction.hpp"
#include "tabtext/fidelity.hpp"
#include "tabtext/generator.hpp"
#include "tabtext/judge.hpp"

namespace tabtext {

// JSON shapes for the per-stage artifact files.

nlohmann::json report_to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

nlohmann::json fidelity_to_json(const FidelityResult& result);
FidelityResult fidelity_from_json(const nlohmann::json& j);

nlohmann::json judge_score_to_json(const JudgeScore& score);
JudgeScore judge_score_from_json(const nlohmann::json& j);

nlohmann::json schema_to_json(const PredictedSchema& schema);
PredictedSchema schema_from_json(const nlohmann::json& j);

nlohmann::json extraction_to_json(const ExtractionResult& result);
ExtractionResult extraction_from_json(const nlohmann::json& j);

nlohmann::json failure_to_json(const FailureEntry& failure);
FailureEntry failure_from_json(const nlohmann::json& j);

// File helpers. Readers throw IngestError on missing or malformed files.

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

void write_jsonl_file(const std::filesystem::path& path,
                      const std::vector<nlohmann::json>& lines);
std::vector<nlohmann::json> read_jsonl_file(const std::filesystem::path& path);

/// FNV-1a 64-bit as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

/// Hash of every regular file under root (relative path + content), for
/// byte-identical artifact tree comparisons.
std::string hash_directory_tree(const std::filesystem::path& root);

}  // namespace tabtext
