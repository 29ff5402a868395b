#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "levelforge/errors.hpp"
#include "levelforge/level.hpp"
#include "test_util.hpp"

using namespace lf;

namespace {

std::string all_empty_text() {
  std::string text;
  for (int r = 0; r < 14; ++r) text += std::string(14, '-') + "\n";
  return text;
}

}  // namespace

TEST_CASE("parse accepts an all-empty segment") {
  const Level level = parse_level(all_empty_text());
  CHECK(level.rows() == 14);
  CHECK(level.width() == 14);
  CHECK(level.segment_count() == 1);
  for (int r = 0; r < 14; ++r)
    for (int c = 0; c < 14; ++c) CHECK(level.grid().at(r, c) == '-');
}

TEST_CASE("parse rejects unknown glyphs with position") {
  std::string text = all_empty_text();
  text[3 * 15 + 5] = '@';  // row 3, column 5 (15 = row width + newline)
  try {
    parse_level(text);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    const std::string what = e.what();
    CHECK(what.find('@') != std::string::npos);
    CHECK(what.find("row 3") != std::string::npos);
    CHECK(what.find("column 5") != std::string::npos);
  }
}

TEST_CASE("parse rejects ragged lines and wrong height") {
  std::string ragged = all_empty_text();
  ragged.insert(ragged.find('\n'), "-");  // first row one longer
  CHECK_THROWS_AS(parse_level(ragged), DataError);

  std::string short_text;
  for (int r = 0; r < 13; ++r) short_text += std::string(14, '-') + "\n";
  CHECK_THROWS_AS(parse_level(short_text), DataError);
}

TEST_CASE("parse/serialize round-trips wide corpus-style levels byte-exactly") {
  // 202 columns: not a multiple of the 14-column segment width, like the
  // widest overworld corpus files.
  std::string text;
  for (int r = 0; r < 14; ++r) {
    std::string row(202, r >= 12 ? 'X' : '-');
    if (r == 11) row[40] = 'E';
    text += row + "\n";
  }
  const Level level = parse_level(text);
  CHECK(level.width() == 202);
  CHECK(level.serialize() == text);
}

TEST_CASE("slice_segments offsets and bounds") {
  Level level = Level::empty();
  level.append(testutil::flat_segment(2));
  level.append(testutil::flat_segment(3));

  CHECK(slice_segments(level, 14, 14).size() == 2);
  CHECK(slice_segments(level, 14, 7).size() == 3);
  CHECK_THROWS_AS(slice_segments(level, 29, 1), std::invalid_argument);

  // Width 20: only offset 0 fits with stride 7.
  const Level narrow(level.grid().window(0, 0, 14, 20));
  CHECK(slice_segments(narrow, 14, 7).size() == 1);

  // stride == width partitions the grid: every cell in exactly one segment.
  const auto parts = slice_segments(level, 14, 14);
  for (int c = 0; c < level.width(); ++c)
    for (int r = 0; r < level.rows(); ++r)
      CHECK(parts[c / 14].at(r, c % 14) == level.grid().at(r, c));
}

TEST_CASE("census counts elements and gap runs") {
  const Segment empty_seg(14, 14, '-');
  ElementCensus c = census(empty_seg);
  CHECK(c.gaps == 1);  // one full-width run
  CHECK(c.pipes == 0);
  CHECK(c.enemies == 0);

  Segment s = testutil::flat_segment(1);
  s.at(10, 3) = 'E';
  s.at(10, 9) = 'E';
  c = census(s);
  CHECK(c.gaps == 0);
  CHECK(c.enemies == 2);

  // Bottom row solid except columns 3-5 and 9: two maximal runs.
  Segment gaps = testutil::flat_segment(1);
  for (int col : {3, 4, 5, 9}) gaps.at(13, col) = '-';
  CHECK(census(gaps).gaps == 2);

  // Pipes count by top-left tile; bullets by cannon heads; question by both
  // '?' and 'Q'.
  Segment elems = testutil::flat_segment(2);
  elems.at(11, 2) = '<';
  elems.at(11, 3) = '>';
  elems.at(8, 6) = '?';
  elems.at(8, 7) = 'Q';
  elems.at(8, 8) = 'o';
  elems.at(11, 10) = 'B';
  c = census(elems);
  CHECK(c.pipes == 1);
  CHECK(c.question_marks == 2);
  CHECK(c.coins == 1);
  CHECK(c.bullets == 1);

  // census survives a serialize/parse round trip.
  const Level lvl = concat(Level::empty(), elems);
  CHECK(census(parse_level(lvl.serialize()).segment(0)) == c);
}

TEST_CASE("concat grows the level and preserves prior contents") {
  Level level = Level::empty();
  const Segment a = testutil::flat_segment(2);
  level = concat(level, a);
  CHECK(level.segment_count() == 1);
  CHECK(level.segment(0) == a);

  Segment b = testutil::flat_segment(4);
  level = concat(level, b);
  CHECK(level.segment_count() == 2);
  CHECK(level.width() == 28);
  CHECK(level.segment(0) == a);
  CHECK(level.segment(1) == b);

  for (int i = 0; i < 98; ++i) level.append(a);
  CHECK(level.width() == 1400);

  Segment wrong(10, 14, '-');
  CHECK_THROWS_AS(level.append(wrong), std::invalid_argument);
}
