#include <doctest.h>

#include <set>

#include "tabtext/textscan.hpp"

using namespace tabtext;

TEST_CASE("temporal extraction handles the slash/fiscal-year mix") {
  const auto mentions = extract_temporals(
      "period ending 12/31/24, with the filing date on 2/6/25 and covering fiscal year 2024");
  REQUIRE(mentions.size() == 3);
  CHECK(mentions[0].kind == TemporalKind::date);
  CHECK(mentions[0].canonical == "2024-12-31");
  CHECK(mentions[0].raw_span == "12/31/24");
  CHECK(mentions[1].kind == TemporalKind::date);
  CHECK(mentions[1].canonical == "2025-02-06");
  CHECK(mentions[2].kind == TemporalKind::year);
  CHECK(mentions[2].canonical == "2024");
  CHECK(mentions[2].raw_span == "fiscal year 2024");
}

TEST_CASE("empty input yields no temporals") { CHECK(extract_temporals("").empty()); }

TEST_CASE("quarter phrasings canonicalize identically") {
  const auto worded = extract_temporals("the fourth quarter of 2022");
  const auto token = extract_temporals("2022 Q4");
  REQUIRE(worded.size() == 1);
  REQUIRE(token.size() == 1);
  CHECK(worded[0].kind == TemporalKind::quarter);
  CHECK(token[0].kind == TemporalKind::quarter);
  CHECK(worded[0].canonical == "2022-Q4");
  CHECK(token[0].canonical == "2022-Q4");

  const auto leading = extract_temporals("results for Q4 2022 were strong");
  REQUIRE(leading.size() == 1);
  CHECK(leading[0].canonical == "2022-Q4");
}

TEST_CASE("month-name forms") {
  const auto date = extract_temporals("the period ending on September 29, 2018 was strong");
  REQUIRE(date.size() == 1);
  CHECK(date[0].kind == TemporalKind::date);
  CHECK(date[0].canonical == "2018-09-29");

  const auto month = extract_temporals("observed in March 2019");
  REQUIRE(month.size() == 1);
  CHECK(month[0].kind == TemporalKind::month);
  CHECK(month[0].canonical == "2019-03");
}

TEST_CASE("ISO dates and bare years") {
  const auto iso = extract_temporals("launched 2021-07-04 exactly");
  REQUIRE(iso.size() == 1);
  CHECK(iso[0].canonical == "2021-07-04");

  const auto year = extract_temporals("founded in 1987.");
  REQUIRE(year.size() == 1);
  CHECK(year[0].kind == TemporalKind::year);
  CHECK(year[0].canonical == "1987");

  // outside [1900, 2100] is not a year
  CHECK(extract_temporals("code 8123 on the badge").empty());
}

TEST_CASE("two-digit year pivot") {
  CHECK(extract_temporals("9/29/18")[0].canonical == "2018-09-29");
  CHECK(extract_temporals("3/1/49")[0].canonical == "2049-03-01");
  CHECK(extract_temporals("3/1/50")[0].canonical == "1950-03-01");
  CHECK(extract_temporals("12/31/99")[0].canonical == "1999-12-31");
}

TEST_CASE("scientific-notation cells are numeric, never temporal") {
  CHECK(extract_temporals("2.65595E+11").empty());
  const auto sets = scan_text("revenue was 2.65595E+11 overall");
  REQUIRE(sets.numerics.size() == 1);
  CHECK(sets.numerics[0].value == doctest::Approx(2.65595e11).epsilon(1e-12));
}

TEST_CASE("numeric extraction: currency with comma groups") {
  const auto sets = scan_text("reported a revenue of $265,595,000,000 for the year");
  // "the year" alone has no temporal
  REQUIRE(sets.numerics.size() == 1);
  CHECK(sets.numerics[0].value == doctest::Approx(2.65595e11).epsilon(1e-12));
  CHECK(sets.numerics[0].unit_tag == UnitTag::currency);
  CHECK(sets.numerics[0].raw_span == "$265,595,000,000");
}

TEST_CASE("temporal mask keeps dates out of the numeric channel") {
  const auto sets =
      scan_text("operating income of $2,370,000,000 for the period ending 12/31/24");
  REQUIRE(sets.temporals.size() == 1);
  REQUIRE(sets.numerics.size() == 1);
  CHECK(sets.numerics[0].value == doctest::Approx(2.37e9).epsilon(1e-12));
}

TEST_CASE("scale words multiply the magnitude") {
  // oracle: 42.8 * 1e9 = 4.28e10
  const auto sets = scan_text("spent $42.8 billion on it");
  REQUIRE(sets.numerics.size() == 1);
  CHECK(sets.numerics[0].value == doctest::Approx(4.28e10).epsilon(1e-12));
  CHECK(sets.numerics[0].raw_span == "$42.8 billion");

  const auto thousands = scan_text("about 3 thousand units");
  REQUIRE(thousands.numerics.size() == 1);
  CHECK(thousands.numerics[0].value == doctest::Approx(3000.0));
}

TEST_CASE("percent suffix tags the mention") {
  const auto sets = scan_text("a margin of 42.5% was kept");
  REQUIRE(sets.numerics.size() == 1);
  CHECK(sets.numerics[0].unit_tag == UnitTag::percent);
  CHECK(sets.numerics[0].value == doctest::Approx(42.5));

  const auto word = scan_text("roughly 7 percent of the total");
  REQUIRE(word.numerics.size() == 1);
  CHECK(word.numerics[0].unit_tag == UnitTag::percent);
}

TEST_CASE("negative and decimal values") {
  const auto sets = scan_text("a change of -12.5 degrees");
  REQUIRE(sets.numerics.size() == 1);
  CHECK(sets.numerics[0].value == doctest::Approx(-12.5));
}

TEST_CASE("sentence-final periods never join the number") {
  const auto sets = scan_text("The value of this record is 1. The next is 2.");
  REQUIRE(sets.numerics.size() == 2);
  CHECK(sets.numerics[0].value == doctest::Approx(1.0));
  CHECK(sets.numerics[1].value == doctest::Approx(2.0));
}

TEST_CASE("mention spans are in bounds, non-overlapping, mask-exclusive") {
  const std::string text =
      "Hilton Worldwide Holdings Inc. (stock ticker: HLT) reported an operating income of "
      "$2,370,000,000 for the period ending 12/31/24, with the filing date on 2/6/25. The "
      "company's cash and cash equivalents were $1,301,000,000 as of 12/31/24, also filed on "
      "2/6/25. These operating metrics highlight the company's operational efficiency and "
      "liquidity position at the end of the fiscal year 2024.";
  const auto sets = scan_text(text);

  std::set<std::size_t> covered;
  auto check_span = [&](std::size_t begin, std::size_t end) {
    CHECK(begin < end);
    CHECK(end <= text.size());
    for (std::size_t i = begin; i < end; ++i) {
      CHECK(covered.insert(i).second);  // exclusive coverage
    }
  };
  for (const auto& m : sets.temporals) check_span(m.begin, m.end);
  for (const auto& m : sets.numerics) check_span(m.begin, m.end);

  REQUIRE(sets.temporals.size() == 5);  // 2 dates twice each + fiscal year
  REQUIRE(sets.numerics.size() == 2);
}

TEST_CASE("cell classification helpers") {
  CHECK(cell_is_temporal("12/31/24"));
  CHECK(cell_is_temporal("  2/6/25 "));
  CHECK(cell_is_temporal("Q3 2021"));
  CHECK_FALSE(cell_is_temporal("HLT"));
  CHECK(cell_is_numeric("2.65595E+11"));
  CHECK(cell_is_numeric("2.41"));
  CHECK(cell_is_numeric("42.5%"));
  CHECK_FALSE(cell_is_numeric("USD/shares"));
  CHECK_FALSE(cell_is_numeric("12/31/24"));
  CHECK_FALSE(cell_is_numeric(""));
}

TEST_CASE("recognizers are total: garbage yields no mentions and no throw") {
  for (const char* junk : {"", "   ", "!!@@##", "a/b/c", "Q// --", "month of nothing"}) {
    const auto sets = scan_text(junk);
    CHECK(sets.numerics.empty());
    CHECK(sets.temporals.empty());
  }
}
