#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tabtext {

enum class TemporalKind { date, month, quarter, year };
enum class UnitTag { plain, currency, percent };

std::string_view to_string(TemporalKind kind);
std::string_view to_string(UnitTag tag);

/// A temporal expression found in text. canonical is the normalized form for
/// the kind: date -> YYYY-MM-DD, month -> YYYY-MM, quarter -> YYYY-Qn,
/// year -> YYYY.
struct TemporalMention {
  std::string raw_span;
  TemporalKind kind = TemporalKind::date;
  std::string canonical;
  std::size_t begin = 0;  // [begin, end) in the scanned text
  std::size_t end = 0;
};

/// A numeric quantity found in text, scale words and exponents applied.
struct NumericMention {
  std::string raw_span;
  double value = 0.0;
  UnitTag unit_tag = UnitTag::plain;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Recognized forms: M/D/YY, M/D/YYYY, YYYY-MM-DD, "Month D, YYYY",
/// "Month YYYY", "Qn YYYY", "YYYY Qn", "the <ordinal> quarter of YYYY",
/// "fiscal year YYYY", and bare four-digit years in [1900, 2100].
/// Mentions are non-overlapping, leftmost-longest. Two-digit years pivot at
/// 50: 00-49 -> 20xx, 50-99 -> 19xx.
std::vector<TemporalMention> extract_temporals(std::string_view text);

/// Recognizes an optional currency symbol, signed digit groups with commas,
/// decimals, scientific notation, scale words (thousand/million/billion/
/// trillion) and percent suffixes. Spans overlapping the temporal mask are
/// skipped; bare years therefore never count as numerics.
std::vector<NumericMention> extract_numerics(std::string_view text,
                                             const std::vector<TemporalMention>& temporal_mask);

struct MentionSets {
  std::vector<NumericMention> numerics;
  std::vector<TemporalMention> temporals;
};

/// Temporal-first scan of a whole passage (or a single cell).
MentionSets scan_text(std::string_view text);

/// True when the trimmed cell is exactly one numeric (resp. temporal) mention.
bool cell_is_numeric(std::string_view cell);
bool cell_is_temporal(std::string_view cell);

}  // namespace tabtext
