#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tabtext {

enum class ColumnKind { numeric, temporal, text, unknown };

std::string_view to_string(ColumnKind kind);

struct ColumnSpec {
  std::string name;
  ColumnKind inferred_kind = ColumnKind::unknown;
};

/// One table row. Cells are raw strings exactly as read from the CSV;
/// a missing value is std::nullopt, never "".
struct RowRecord {
  int row_id = 0;
  std::map<std::string, std::optional<std::string>> cells;

  const std::optional<std::string>& cell(const std::string& column) const;
};

struct TableSpec {
  std::string table_id;
  std::vector<ColumnSpec> columns;
  std::vector<RowRecord> rows;

  bool has_column(std::string_view name) const;
  std::vector<std::string> column_names() const;
};

/// Case-insensitive glob match supporting '*' and '?'.
bool glob_match(std::string_view pattern, std::string_view name);

/// Classify a column from its cell values: numeric or temporal when at least
/// 80% of the non-null samples parse fully as that kind, text otherwise,
/// unknown when every sample is null.
ColumnKind infer_column_kind(const std::vector<std::optional<std::string>>& sample_cells);

/// Load a CSV file (UTF-8, header row, RFC 4180 quoting) into a TableSpec,
/// dropping every column whose normalized name matches a denylist pattern.
/// Cell strings are kept verbatim; empty fields become null cells.
TableSpec load_table(const std::filesystem::path& path,
                     const std::vector<std::string>& denylist);

/// Write a TableSpec back out as RFC 4180 CSV (round-trips with load_table).
void write_table_csv(const TableSpec& table, const std::filesystem::path& path);

namespace detail {
// Parsed CSV records, quoting resolved; exposed for tests.
std::vector<std::vector<std::string>> parse_csv(std::string_view text,
                                                const std::string& source_name);
std::string normalize_column_name(std::string_view raw);
}  // namespace detail

}  // namespace tabtext
