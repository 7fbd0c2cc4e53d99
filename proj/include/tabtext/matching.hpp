#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabtext/table.hpp"

namespace tabtext {

std::size_t levenshtein(std::string_view a, std::string_view b);

/// Case-fold, turn '_'/'-' into spaces and collapse whitespace runs.
std::string normalize_name(std::string_view raw);
/// Case-fold and collapse whitespace only (values keep their surface form).
std::string normalize_value(std::string_view raw);

/// 1 - levenshtein(a', b') / max(|a'|, |b'|) over normalized names;
/// both empty -> 1.
double name_similarity(std::string_view a, std::string_view b);
/// Same shape, but with value normalization.
double value_similarity(std::string_view a, std::string_view b);

/// Slot for alternative column-name similarity measures (an embedding-based
/// scorer plugs in here); the edit-distance measure is the default.
using NameSimilarityFn = std::function<double(std::string_view, std::string_view)>;

/// Maximum-total-weight one-to-one assignment (Hungarian).
/// weight[i][j] >= 0; returns per-row column index, -1 when unassigned
/// (only possible when there are more rows than columns).
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weight);

struct AssignedPair {
  std::string gt_column;
  std::string predicted_column;
  double similarity = 0.0;
};

struct ColumnAssignment {
  std::vector<AssignedPair> pairs;  // ordered by ground-truth column
  std::vector<std::string> unmatched_gt;
  std::vector<std::string> unmatched_predicted;
  double total_similarity = 0.0;
  std::size_t gt_count = 0;
  std::size_t predicted_count = 0;
};

/// Optimal bipartite assignment between column name sets under the given
/// similarity. Either side empty yields a degenerate assignment.
ColumnAssignment assign_columns(const std::vector<std::string>& gt_columns,
                                const std::vector<std::string>& predicted_columns,
                                const NameSimilarityFn& similarity = name_similarity);

struct MatchScore {
  double precision = 0.0;
  double recall = 0.0;
  std::optional<double> f1;
  long precision_support = 0;  // denominator counts, used as aggregation weights
  long recall_support = 0;
  bool undefined_precision = false;
};

/// Similarity-weighted column identification score:
/// P = sum(sim) / |predicted|, R = sum(sim) / |gt|.
MatchScore score_columns(const ColumnAssignment& assignment);

using KvRecord = std::map<std::string, std::optional<std::string>>;

struct RowExtraction {
  int row_id = 0;
  KvRecord kv;
};

/// How extracted value strings are compared against ground-truth cells.
/// surface: case-fold + whitespace collapse only (the default benchmark
/// setting). normalized: values that both parse as a single numeric or
/// temporal mention compare by magnitude (0.1% tolerance) or canonical form.
enum class ValueComparison { surface, normalized };

/// Similarity-weighted value extraction score across all rows of one report
/// type. The assignment fixes the column correspondence; null-vs-null pairs
/// are skipped, null-vs-non-null counts 0 on the non-null side. f1 is
/// omitted when either support is 0.
MatchScore score_values(const ColumnAssignment& assignment,
                        const std::vector<RowExtraction>& extractions,
                        const TableSpec& gt_table,
                        ValueComparison comparison = ValueComparison::surface);

/// Size-weighted mean of per-table scores. f1 aggregates only when every
/// input carries one.
MatchScore aggregate_datasets(const std::vector<std::pair<MatchScore, long>>& per_table_scores);

}  // namespace tabtext
