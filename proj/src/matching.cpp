#include "tabtext/matching.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>

#include "tabtext/errors.hpp"
#include "tabtext/fidelity.hpp"

namespace tabtext {

std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t saved = row[j];
      if (a[i - 1] == b[j - 1]) {
        row[j] = diag;
      } else {
        row[j] = 1 + std::min({row[j], row[j - 1], diag});
      }
      diag = saved;
    }
  }
  return row[b.size()];
}

namespace {

std::string fold_and_collapse(std::string_view raw, bool unify_separators) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    bool is_sep = std::isspace(static_cast<unsigned char>(c)) ||
                  (unify_separators && (c == '_' || c == '-'));
    if (is_sep) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

double similarity_of(const std::string& a, const std::string& b) {
  const std::size_t max_len = std::max(a.size(), b.size());
  if (max_len == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(max_len);
}

}  // namespace

std::string normalize_name(std::string_view raw) { return fold_and_collapse(raw, true); }

std::string normalize_value(std::string_view raw) { return fold_and_collapse(raw, false); }

double name_similarity(std::string_view a, std::string_view b) {
  return similarity_of(normalize_name(a), normalize_name(b));
}

double value_similarity(std::string_view a, std::string_view b) {
  return similarity_of(normalize_value(a), normalize_value(b));
}

namespace {

// Hungarian algorithm with potentials, minimizing cost over an n x m matrix
// with n <= m; assigns every row.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const int m = n ? static_cast<int>(cost[0].size()) : 0;
  const double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weight) {
  const std::size_t n = weight.size();
  const std::size_t m = n ? weight[0].size() : 0;
  if (n == 0 || m == 0) return std::vector<int>(n, -1);

  if (n <= m) {
    std::vector<std::vector<double>> cost(n, std::vector<double>(m));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) cost[i][j] = -weight[i][j];
    }
    return min_cost_assignment(cost);
  }

  // More rows than columns: solve the transpose, then invert.
  std::vector<std::vector<double>> cost(m, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) cost[j][i] = -weight[i][j];
  }
  std::vector<int> col_to_row = min_cost_assignment(cost);
  std::vector<int> row_to_col(n, -1);
  for (std::size_t j = 0; j < m; ++j) {
    if (col_to_row[j] >= 0) row_to_col[col_to_row[j]] = static_cast<int>(j);
  }
  return row_to_col;
}

ColumnAssignment assign_columns(const std::vector<std::string>& gt_columns,
                                const std::vector<std::string>& predicted_columns,
                                const NameSimilarityFn& similarity) {
  ColumnAssignment result;
  result.gt_count = gt_columns.size();
  result.predicted_count = predicted_columns.size();
  if (gt_columns.empty() || predicted_columns.empty()) {
    result.unmatched_gt = gt_columns;
    result.unmatched_predicted = predicted_columns;
    return result;
  }

  std::vector<std::vector<double>> sim(gt_columns.size(),
                                       std::vector<double>(predicted_columns.size()));
  for (std::size_t i = 0; i < gt_columns.size(); ++i) {
    for (std::size_t j = 0; j < predicted_columns.size(); ++j) {
      sim[i][j] = similarity(gt_columns[i], predicted_columns[j]);
    }
  }

  std::vector<int> row_to_col = max_weight_assignment(sim);
  std::vector<bool> predicted_used(predicted_columns.size(), false);
  for (std::size_t i = 0; i < gt_columns.size(); ++i) {
    const int j = row_to_col[i];
    if (j < 0) {
      result.unmatched_gt.push_back(gt_columns[i]);
      continue;
    }
    predicted_used[j] = true;
    result.pairs.push_back({gt_columns[i], predicted_columns[j], sim[i][j]});
    result.total_similarity += sim[i][j];
  }
  for (std::size_t j = 0; j < predicted_columns.size(); ++j) {
    if (!predicted_used[j]) result.unmatched_predicted.push_back(predicted_columns[j]);
  }
  return result;
}

namespace {

std::optional<double> harmonic_f1(double p, double r) {
  if (p + r <= 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

}  // namespace

MatchScore score_columns(const ColumnAssignment& assignment) {
  MatchScore score;
  score.precision_support = static_cast<long>(assignment.predicted_count);
  score.recall_support = static_cast<long>(assignment.gt_count);
  double total = 0.0;
  for (const auto& pair : assignment.pairs) total += pair.similarity;
  if (assignment.predicted_count == 0) {
    score.precision = 0.0;
    score.undefined_precision = true;
  } else {
    score.precision = total / static_cast<double>(assignment.predicted_count);
  }
  score.recall = assignment.gt_count == 0
                     ? 0.0
                     : total / static_cast<double>(assignment.gt_count);
  score.f1 = harmonic_f1(score.precision, score.recall);
  return score;
}

namespace {

double normalized_value_similarity(const std::string& predicted, const std::string& gt) {
  const MentionSets p = scan_text(predicted);
  const MentionSets g = scan_text(gt);
  const bool p_numeric = p.numerics.size() == 1 && p.temporals.empty();
  const bool g_numeric = g.numerics.size() == 1 && g.temporals.empty();
  if (p_numeric && g_numeric) {
    return numeric_values_match(p.numerics[0].value, p.numerics[0].unit_tag,
                                g.numerics[0].value, g.numerics[0].unit_tag)
               ? 1.0
               : 0.0;
  }
  const bool p_temporal = p.temporals.size() == 1 && p.numerics.empty();
  const bool g_temporal = g.temporals.size() == 1 && g.numerics.empty();
  if (p_temporal && g_temporal) {
    return p.temporals[0].kind == g.temporals[0].kind &&
                   p.temporals[0].canonical == g.temporals[0].canonical
               ? 1.0
               : 0.0;
  }
  return value_similarity(predicted, gt);
}

}  // namespace

MatchScore score_values(const ColumnAssignment& assignment,
                        const std::vector<RowExtraction>& extractions,
                        const TableSpec& gt_table,
                        ValueComparison comparison) {
  std::map<std::string, std::string> gt_for_predicted;  // predicted col -> gt col
  for (const auto& pair : assignment.pairs) {
    gt_for_predicted[pair.predicted_column] = pair.gt_column;
  }
  std::set<std::string> assigned_gt;
  for (const auto& pair : assignment.pairs) assigned_gt.insert(pair.gt_column);

  std::map<int, const RowRecord*> rows_by_id;
  for (const auto& row : gt_table.rows) rows_by_id[row.row_id] = &row;

  double total = 0.0;
  long predicted_non_null = 0;
  long gt_non_null = 0;
  for (const auto& extraction : extractions) {
    auto row_it = rows_by_id.find(extraction.row_id);
    const RowRecord* row = row_it == rows_by_id.end() ? nullptr : row_it->second;
    for (const auto& [predicted_column, value] : extraction.kv) {
      if (value.has_value()) ++predicted_non_null;
      auto gt_it = gt_for_predicted.find(predicted_column);
      if (gt_it == gt_for_predicted.end() || row == nullptr) continue;
      const auto& gt_cell = row->cell(gt_it->second);
      if (value.has_value() && gt_cell.has_value()) {
        total += comparison == ValueComparison::surface
                     ? value_similarity(*value, *gt_cell)
                     : normalized_value_similarity(*value, *gt_cell);
      }
    }
    if (row != nullptr) {
      for (const auto& gt_column : assigned_gt) {
        if (row->cell(gt_column).has_value()) ++gt_non_null;
      }
    }
  }

  MatchScore score;
  score.precision_support = predicted_non_null;
  score.recall_support = gt_non_null;
  if (predicted_non_null == 0) {
    score.precision = 0.0;
    score.undefined_precision = true;
  } else {
    score.precision = total / static_cast<double>(predicted_non_null);
  }
  score.recall = gt_non_null == 0 ? 0.0 : total / static_cast<double>(gt_non_null);
  if (predicted_non_null > 0 && gt_non_null > 0) {
    score.f1 = harmonic_f1(score.precision, score.recall);
  }
  return score;
}

MatchScore aggregate_datasets(const std::vector<std::pair<MatchScore, long>>& per_table_scores) {
  if (per_table_scores.empty()) throw AggregationError("nothing to aggregate");
  long total_size = 0;
  for (const auto& [score, size] : per_table_scores) total_size += size;
  if (total_size <= 0) throw AggregationError("aggregate over zero total size");

  MatchScore out;
  double f1 = 0.0;
  bool all_have_f1 = true;
  for (const auto& [score, size] : per_table_scores) {
    const double w = static_cast<double>(size) / static_cast<double>(total_size);
    out.precision += w * score.precision;
    out.recall += w * score.recall;
    out.precision_support += score.precision_support;
    out.recall_support += score.recall_support;
    if (score.f1.has_value()) {
      f1 += w * *score.f1;
    } else {
      all_have_f1 = false;
    }
  }
  if (all_have_f1) out.f1 = f1;
  return out;
}

}  // namespace tabtext
