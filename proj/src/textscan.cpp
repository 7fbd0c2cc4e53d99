#include "tabtext/textscan.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <optional>

namespace tabtext {

std::string_view to_string(TemporalKind kind) {
  switch (kind) {
    case TemporalKind::date: return "date";
    case TemporalKind::month: return "month";
    case TemporalKind::quarter: return "quarter";
    case TemporalKind::year: return "year";
  }
  return "date";
}

std::string_view to_string(UnitTag tag) {
  switch (tag) {
    case UnitTag::plain: return "plain";
    case UnitTag::currency: return "currency";
    case UnitTag::percent: return "percent";
  }
  return "plain";
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return is_digit(c) || is_alpha(c); }
char fold(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool valid_month(int m) { return m >= 1 && m <= 12; }
bool valid_day(int d) { return d >= 1 && d <= 31; }

int pivot_two_digit_year(int yy) { return yy <= 49 ? 2000 + yy : 1900 + yy; }

std::string pad2(int v) {
  std::string s = std::to_string(v);
  return s.size() < 2 ? "0" + s : s;
}

std::string date_canonical(int y, int m, int d) {
  return std::to_string(y) + "-" + pad2(m) + "-" + pad2(d);
}

// Cursor over the scanned text; match_* helpers advance only on success.
struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  bool done() const { return pos >= text.size(); }
  char peek(std::size_t off = 0) const {
    return pos + off < text.size() ? text[pos + off] : '\0';
  }

  // Run of ASCII digits, between min_len and max_len long.
  std::optional<int> match_digits(int min_len, int max_len) {
    std::size_t n = 0;
    while (n < static_cast<std::size_t>(max_len) && is_digit(peek(n))) ++n;
    if (is_digit(peek(n))) return std::nullopt;  // longer run than allowed
    if (n < static_cast<std::size_t>(min_len)) return std::nullopt;
    int value = 0;
    for (std::size_t i = 0; i < n; ++i) value = value * 10 + (peek(i) - '0');
    pos += n;
    return value;
  }

  bool match_char(char c) {
    if (peek() != c) return false;
    ++pos;
    return true;
  }

  // Case-insensitive word with a right letter boundary.
  bool match_word(std::string_view word) {
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (fold(peek(i)) != fold(word[i])) return false;
    }
    if (is_alpha(peek(word.size()))) return false;
    pos += word.size();
    return true;
  }

  bool match_ws() {
    std::size_t n = 0;
    while (std::isspace(static_cast<unsigned char>(peek(n))) && peek(n) != '\0') ++n;
    if (n == 0) return false;
    pos += n;
    return true;
  }
};

const std::array<std::string_view, 12> kMonthNames = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};
const std::array<std::string_view, 13> kMonthAbbrevs = {
    "jan", "feb", "mar", "apr", "may", "jun", "jul",
    "aug", "sept", "sep", "oct", "nov", "dec"};

int month_for_abbrev(std::string_view abbrev) {
  static const std::array<int, 13> nums = {1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 10, 11, 12};
  for (std::size_t i = 0; i < kMonthAbbrevs.size(); ++i) {
    if (abbrev == kMonthAbbrevs[i]) return nums[i];
  }
  return 0;
}

// Month name (full first, then abbreviation with optional trailing dot).
std::optional<int> match_month_name(Cursor& c) {
  for (std::size_t m = 0; m < kMonthNames.size(); ++m) {
    if (c.match_word(kMonthNames[m])) return static_cast<int>(m) + 1;
  }
  for (const auto& abbrev : kMonthAbbrevs) {
    if (c.match_word(abbrev)) {
      c.match_char('.');
      return month_for_abbrev(abbrev);
    }
  }
  return std::nullopt;
}

std::optional<int> match_ordinal(Cursor& c) {
  if (c.match_word("first") || c.match_word("1st")) return 1;
  if (c.match_word("second") || c.match_word("2nd")) return 2;
  if (c.match_word("third") || c.match_word("3rd")) return 3;
  if (c.match_word("fourth") || c.match_word("4th")) return 4;
  return std::nullopt;
}

struct TemporalCandidate {
  std::size_t end;
  TemporalKind kind;
  std::string canonical;
};

bool right_boundary(std::string_view text, std::size_t end) {
  return end >= text.size() || !is_alnum(text[end]);
}

// "fiscal year 2024"
std::optional<TemporalCandidate> try_fiscal_year(std::string_view text, std::size_t start) {
  Cursor c{text, start};
  if (!c.match_word("fiscal")) return std::nullopt;
  if (!c.match_ws()) return std::nullopt;
  if (!c.match_word("year")) return std::nullopt;
  if (!c.match_ws()) return std::nullopt;
  auto year = c.match_digits(4, 4);
  if (!year || !right_boundary(text, c.pos)) return std::nullopt;
  return TemporalCandidate{c.pos, TemporalKind::year, std::to_string(*year)};
}

// "the fourth quarter of 2022" (leading "the" optional)
std::optional<TemporalCandidate> try_ordinal_quarter(std::string_view text, std::size_t start) {
  Cursor c{text, start};
  if (c.match_word("the") && !c.match_ws()) return std::nullopt;
  auto q = match_ordinal(c);
  if (!q) return std::nullopt;
  if (!c.match_ws() || !c.match_word("quarter")) return std::nullopt;
  if (!c.match_ws() || !c.match_word("of")) return std::nullopt;
  if (!c.match_ws()) return std::nullopt;
  auto year = c.match_digits(4, 4);
  if (!year || !right_boundary(text, c.pos)) return std::nullopt;
  return TemporalCandidate{c.pos, TemporalKind::quarter,
                           std::to_string(*year) + "-Q" + std::to_string(*q)};
}

// "September 29, 2018" -> date; "March 2019" -> month
std::optional<TemporalCandidate> try_month_name_form(std::string_view text, std::size_t start) {
  Cursor c{text, start};
  auto month = match_month_name(c);
  if (!month || !c.match_ws()) return std::nullopt;

  Cursor with_day = c;
  if (auto day = with_day.match_digits(1, 2); day && valid_day(*day)) {
    Cursor rest = with_day;
    if (rest.match_char(',') && rest.match_ws()) {
      if (auto year = rest.match_digits(4, 4); year && right_boundary(text, rest.pos)) {
        return TemporalCandidate{rest.pos, TemporalKind::date,
                                 date_canonical(*year, *month, *day)};
      }
    }
  }
  if (auto year = c.match_digits(4, 4); year && right_boundary(text, c.pos)) {
    return TemporalCandidate{c.pos, TemporalKind::month,
                             std::to_string(*year) + "-" + pad2(*month)};
  }
  return std::nullopt;
}

// "2024-12-31"
std::optional<TemporalCandidate> try_iso_date(std::string_view text, std::size_t start) {
  Cursor c{text, start};
  auto y = c.match_digits(4, 4);
  if (!y || !c.match_char('-')) return std::nullopt;
  auto m = c.match_digits(2, 2);
  if (!m || !c.match_char('-')) return std::nullopt;
  auto d = c.match_digits(2, 2);
  if (!d || !valid_month(*m) || !valid_day(*d)) return std::nullopt;
  if (!right_boundary(text, c.pos)) return std::nullopt;
  return TemporalCandidate{c.pos, TemporalKind::date, date_canonical(*y, *m, *d)};
}

// "12/31/24" or "12/31/2024"
std::optional<TemporalCandidate> try_slash_date(std::string_view text, std::size_t start) {
  Cursor c{text, start};
  auto m = c.match_digits(1, 2);
  if (!m || !valid_month(*m) || !c.match_char('/')) return std::nullopt;
  auto d = c.match_digits(1, 2);
  if (!d || !valid_day(*d) || !c.match_char('/')) return std::nullopt;
  Cursor four = c;
  if (auto y = four.match_digits(4, 4); y && right_boundary(text, four.pos)) {
    return TemporalCandidate{four.pos, TemporalKind::date, date_canonical(*y, *m, *d)};
  }
  if (auto yy = c.match_digits(2, 2); yy && right_boundary(text, c.pos)) {
    return TemporalCandidate{c.pos, TemporalKind::date,
                             date_canonical(pivot_two_digit_year(*yy), *m, *d)};
  }
  return std::nullopt;
}

// "Q4 2022" / "2022 Q4"
std::optional<TemporalCandidate> try_quarter_token(std::string_view text, std::size_t start) {
  {
    Cursor c{text, start};
    if ((c.match_char('Q') || c.match_char('q'))) {
      auto q = c.match_digits(1, 1);
      if (q && *q >= 1 && *q <= 4 && c.match_ws()) {
        if (auto year = c.match_digits(4, 4); year && right_boundary(text, c.pos)) {
          return TemporalCandidate{c.pos, TemporalKind::quarter,
                                   std::to_string(*year) + "-Q" + std::to_string(*q)};
        }
      }
    }
  }
  Cursor c{text, start};
  auto year = c.match_digits(4, 4);
  if (!year || !c.match_ws()) return std::nullopt;
  if (!c.match_char('Q') && !c.match_char('q')) return std::nullopt;
  auto q = c.match_digits(1, 1);
  if (!q || *q < 1 || *q > 4 || !right_boundary(text, c.pos)) return std::nullopt;
  return TemporalCandidate{c.pos, TemporalKind::quarter,
                           std::to_string(*year) + "-Q" + std::to_string(*q)};
}

// bare year in [1900, 2100]
std::optional<TemporalCandidate> try_bare_year(std::string_view text, std::size_t start) {
  Cursor c{text, start};
  auto y = c.match_digits(4, 4);
  if (!y || *y < 1900 || *y > 2100) return std::nullopt;
  if (!right_boundary(text, c.pos)) return std::nullopt;
  return TemporalCandidate{c.pos, TemporalKind::year, std::to_string(*y)};
}

std::optional<TemporalCandidate> best_temporal_at(std::string_view text, std::size_t start) {
  std::optional<TemporalCandidate> best;
  auto consider = [&](std::optional<TemporalCandidate> cand) {
    if (cand && (!best || cand->end > best->end)) best = std::move(cand);
  };
  consider(try_fiscal_year(text, start));
  consider(try_ordinal_quarter(text, start));
  consider(try_month_name_form(text, start));
  consider(try_iso_date(text, start));
  consider(try_slash_date(text, start));
  consider(try_quarter_token(text, start));
  consider(try_bare_year(text, start));
  return best;
}

}  // namespace

std::vector<TemporalMention> extract_temporals(std::string_view text) {
  std::vector<TemporalMention> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_alnum(text[i]) || (i > 0 && is_alnum(text[i - 1]))) {
      ++i;
      continue;
    }
    if (auto cand = best_temporal_at(text, i)) {
      out.push_back(TemporalMention{std::string(text.substr(i, cand->end - i)), cand->kind,
                                    std::move(cand->canonical), i, cand->end});
      i = cand->end;
    } else {
      ++i;
    }
  }
  return out;
}

namespace {

struct NumericCandidate {
  std::size_t end;
  double value;
  UnitTag tag;
};

const std::array<std::string_view, 4> kCurrencySymbols = {"$", "€", "£", "¥"};

std::size_t match_currency_symbol(std::string_view text, std::size_t pos) {
  for (auto symbol : kCurrencySymbols) {
    if (text.substr(pos, symbol.size()) == symbol) return symbol.size();
  }
  return 0;
}

// Digits with strict thousands grouping ("265,595,000,000") or a plain run.
// Returns the matched length and writes the digits (commas stripped).
std::size_t match_digit_block(std::string_view text, std::size_t pos, std::string& digits) {
  std::size_t plain = 0;
  while (pos + plain < text.size() && is_digit(text[pos + plain])) ++plain;
  if (plain == 0) return 0;

  std::size_t grouped = 0;
  if (plain <= 3) {
    std::size_t p = pos + plain;
    std::size_t groups = 0;
    while (p + 3 < text.size() && text[p] == ',' && is_digit(text[p + 1]) &&
           is_digit(text[p + 2]) && is_digit(text[p + 3]) &&
           (p + 4 >= text.size() || !is_digit(text[p + 4]))) {
      p += 4;
      ++groups;
    }
    if (groups > 0) grouped = p - pos;
  }

  std::size_t len = std::max(plain, grouped);
  digits.clear();
  for (std::size_t i = 0; i < len; ++i) {
    if (text[pos + i] != ',') digits.push_back(text[pos + i]);
  }
  return len;
}

std::optional<double> scale_word_multiplier(std::string_view word) {
  if (word == "thousand") return 1e3;
  if (word == "million") return 1e6;
  if (word == "billion") return 1e9;
  if (word == "trillion") return 1e12;
  return std::nullopt;
}

std::optional<NumericCandidate> try_numeric_at(std::string_view text, std::size_t start) {
  std::size_t pos = start;
  bool negative = false;
  bool currency = false;

  if (text[pos] == '-' || text[pos] == '+') {
    negative = text[pos] == '-';
    ++pos;
  }
  if (std::size_t n = match_currency_symbol(text, pos)) {
    currency = true;
    pos += n;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+') && !negative) {
      negative = text[pos] == '-';
      ++pos;
    }
  }

  std::string digits;
  std::size_t len = match_digit_block(text, pos, digits);
  if (len == 0) return std::nullopt;
  pos += len;

  std::string literal = digits;
  if (pos + 1 < text.size() && text[pos] == '.' && is_digit(text[pos + 1])) {
    literal.push_back('.');
    ++pos;
    while (pos < text.size() && is_digit(text[pos])) literal.push_back(text[pos++]);
  }
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    std::size_t p = pos + 1;
    std::string exp;
    if (p < text.size() && (text[p] == '+' || text[p] == '-')) exp.push_back(text[p++]);
    std::size_t exp_digits = 0;
    while (p < text.size() && is_digit(text[p])) {
      exp.push_back(text[p++]);
      ++exp_digits;
    }
    if (exp_digits > 0 && (p >= text.size() || !is_alnum(text[p]))) {
      literal += "e" + exp;
      pos = p;
    }
  }

  double value = std::strtod(literal.c_str(), nullptr);
  if (negative) value = -value;

  // scale word ("42.8 billion")
  {
    Cursor c{text, pos};
    Cursor after_ws = c;
    if (after_ws.match_ws()) {
      for (auto word : {"thousand", "million", "billion", "trillion"}) {
        Cursor w = after_ws;
        if (w.match_word(word)) {
          value *= *scale_word_multiplier(word);
          pos = w.pos;
          break;
        }
      }
    }
  }

  UnitTag tag = currency ? UnitTag::currency : UnitTag::plain;
  if (pos < text.size() && text[pos] == '%') {
    tag = UnitTag::percent;
    ++pos;
  } else {
    Cursor c{text, pos};
    if (c.match_ws() && c.match_word("percent")) {
      tag = UnitTag::percent;
      pos = c.pos;
    }
  }

  return NumericCandidate{pos, value, tag};
}

bool overlaps_mask(std::size_t begin, std::size_t end,
                   const std::vector<TemporalMention>& mask) {
  for (const auto& m : mask) {
    if (begin < m.end && m.begin < end) return true;
  }
  return false;
}

bool numeric_start_boundary(std::string_view text, std::size_t i) {
  char c = text[i];
  bool starts = is_digit(c) || c == '-' || c == '+' || match_currency_symbol(text, i) > 0;
  if (!starts) return false;
  if (i > 0 && is_alnum(text[i - 1])) return false;
  if (i > 0 && text[i - 1] == '.') return false;  // tail of another number
  return true;
}

}  // namespace

std::vector<NumericMention> extract_numerics(std::string_view text,
                                             const std::vector<TemporalMention>& temporal_mask) {
  std::vector<NumericMention> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!numeric_start_boundary(text, i)) {
      ++i;
      continue;
    }
    if (overlaps_mask(i, i + 1, temporal_mask)) {
      ++i;
      continue;
    }
    auto cand = try_numeric_at(text, i);
    if (!cand) {
      ++i;
      continue;
    }
    if (overlaps_mask(i, cand->end, temporal_mask)) {
      ++i;
      continue;
    }
    out.push_back(NumericMention{std::string(text.substr(i, cand->end - i)), cand->value,
                                 cand->tag, i, cand->end});
    i = cand->end;
  }
  return out;
}

MentionSets scan_text(std::string_view text) {
  MentionSets sets;
  sets.temporals = extract_temporals(text);
  sets.numerics = extract_numerics(text, sets.temporals);
  return sets;
}

namespace {

std::string_view trimmed(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

bool cell_is_numeric(std::string_view cell) {
  auto t = trimmed(cell);
  if (t.empty()) return false;
  auto sets = scan_text(t);
  return sets.temporals.empty() && sets.numerics.size() == 1 &&
         sets.numerics[0].begin == 0 && sets.numerics[0].end == t.size();
}

bool cell_is_temporal(std::string_view cell) {
  auto t = trimmed(cell);
  if (t.empty()) return false;
  auto sets = scan_text(t);
  return sets.numerics.empty() && sets.temporals.size() == 1 &&
         sets.temporals[0].begin == 0 && sets.temporals[0].end == t.size();
}

}  // namespace tabtext
