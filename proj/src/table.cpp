#include "tabtext/table.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "tabtext/errors.hpp"
#include "tabtext/textscan.hpp"

namespace tabtext {

std::string_view to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::numeric: return "numeric";
    case ColumnKind::temporal: return "temporal";
    case ColumnKind::text: return "text";
    case ColumnKind::unknown: return "unknown";
  }
  return "unknown";
}

const std::optional<std::string>& RowRecord::cell(const std::string& column) const {
  static const std::optional<std::string> kNull;
  auto it = cells.find(column);
  return it == cells.end() ? kNull : it->second;
}

bool TableSpec::has_column(std::string_view name) const {
  return std::any_of(columns.begin(), columns.end(),
                     [&](const ColumnSpec& c) { return c.name == name; });
}

std::vector<std::string> TableSpec::column_names() const {
  std::vector<std::string> names;
  names.reserve(columns.size());
  for (const auto& c : columns) names.push_back(c.name);
  return names;
}

namespace {

char fold(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

}  // namespace

bool glob_match(std::string_view pattern, std::string_view name) {
  std::size_t p = 0, n = 0;
  std::size_t star = std::string_view::npos, star_n = 0;
  while (n < name.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || fold(pattern[p]) == fold(name[n]))) {
      ++p;
      ++n;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      star_n = n;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      n = ++star_n;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

ColumnKind infer_column_kind(const std::vector<std::optional<std::string>>& sample_cells) {
  std::size_t non_null = 0, numeric = 0, temporal = 0;
  for (const auto& cell : sample_cells) {
    if (!cell.has_value()) continue;
    ++non_null;
    if (cell_is_temporal(*cell)) {
      ++temporal;
    } else if (cell_is_numeric(*cell)) {
      ++numeric;
    }
  }
  if (non_null == 0) return ColumnKind::unknown;
  // >= 80%, exact integer arithmetic
  if (numeric * 5 >= non_null * 4) return ColumnKind::numeric;
  if (temporal * 5 >= non_null * 4) return ColumnKind::temporal;
  return ColumnKind::text;
}

namespace detail {

std::string normalize_column_name(std::string_view raw) {
  std::size_t b = 0, e = raw.size();
  while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
  return std::string(raw.substr(b, e - b));
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text,
                                                const std::string& source_name) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(field);
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && text[i + 1] == '"') {
          field.push_back('"');
          i += 2;
        } else {
          in_quotes = false;
          ++i;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
        ++i;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw IngestError(source_name + ":" + std::to_string(line) +
                            ": stray quote inside unquoted field");
        }
        in_quotes = true;
        field_was_quoted = true;
        ++i;
        break;
      case ',':
        end_field();
        ++i;
        break;
      case '\r':
        if (i + 1 < n && text[i + 1] == '\n') ++i;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        ++i;
        break;
      default:
        if (field_was_quoted) {
          throw IngestError(source_name + ":" + std::to_string(line) +
                            ": data after closing quote");
        }
        field.push_back(c);
        ++i;
    }
  }
  if (in_quotes) {
    throw IngestError(source_name + ":" + std::to_string(line) + ": unterminated quoted field");
  }
  if (!field.empty() || field_was_quoted || !record.empty()) end_record();
  return records;
}

}  // namespace detail

TableSpec load_table(const std::filesystem::path& path,
                     const std::vector<std::string>& denylist) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open CSV file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  const std::string source = path.filename().string();
  auto records = detail::parse_csv(text, source);
  if (records.empty()) throw IngestError(source + ":1: missing header row");

  const auto& header = records.front();
  std::vector<std::string> names;
  std::vector<std::size_t> kept;  // indices into the raw header
  std::set<std::string> seen;     // case-folded, for duplicate detection
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::string name = detail::normalize_column_name(header[i]);
    if (name.empty()) {
      throw SchemaError(source + ":1: empty column name at position " + std::to_string(i + 1));
    }
    std::string folded = name;
    std::transform(folded.begin(), folded.end(), folded.begin(), fold);
    if (!seen.insert(folded).second) {
      throw SchemaError(source + ":1: duplicate column name after normalization: " + name);
    }
    bool denied = std::any_of(denylist.begin(), denylist.end(),
                              [&](const std::string& p) { return glob_match(p, name); });
    if (!denied) {
      names.push_back(std::move(name));
      kept.push_back(i);
    }
  }

  TableSpec table;
  table.table_id = path.stem().string();
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      throw IngestError(source + ":" + std::to_string(r + 1) + ": expected " +
                        std::to_string(header.size()) + " fields, found " +
                        std::to_string(rec.size()));
    }
    RowRecord row;
    row.row_id = static_cast<int>(r - 1);
    for (std::size_t k = 0; k < kept.size(); ++k) {
      const std::string& value = rec[kept[k]];
      row.cells[names[k]] = value.empty() ? std::nullopt : std::optional<std::string>(value);
    }
    table.rows.push_back(std::move(row));
  }

  for (const auto& name : names) {
    std::vector<std::optional<std::string>> cells;
    cells.reserve(table.rows.size());
    for (const auto& row : table.rows) cells.push_back(row.cell(name));
    table.columns.push_back({name, infer_column_kind(cells)});
  }
  return table;
}

namespace {

std::string csv_escape(const std::string& field) {
  bool needs_quotes = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

void write_table_csv(const TableSpec& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write CSV file: " + path.string());
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(table.columns[i].name);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      if (i) out << ',';
      const auto& cell = row.cell(table.columns[i].name);
      if (cell) out << csv_escape(*cell);
    }
    out << '\n';
  }
}

}  // namespace tabtext
