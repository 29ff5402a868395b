#pragma once

#include <string>
#include <vector>

#include "levelforge/grid.hpp"
#include "levelforge/tiles.hpp"

namespace lf {

inline constexpr int kSegmentRows = 14;
inline constexpr int kSegmentCols = 14;

/// Per-segment census of the level elements reported by `lf analyze` and the
/// evaluation harness.
struct ElementCensus {
  int gaps = 0;
  int pipes = 0;
  int enemies = 0;
  int bullets = 0;
  int coins = 0;
  int question_marks = 0;

  ElementCensus& operator+=(const ElementCensus& o) {
    gaps += o.gaps;
    pipes += o.pipes;
    enemies += o.enemies;
    bullets += o.bullets;
    coins += o.coins;
    question_marks += o.question_marks;
    return *this;
  }
  bool operator==(const ElementCensus&) const = default;
};

/// An ordered run of segments. Backed by the full tile grid so corpus files
/// whose width is not a segment multiple (e.g. 202 columns) load unchanged;
/// generated levels always grow in whole segments.
class Level {
 public:
  Level() = default;
  explicit Level(TileGrid grid, int segment_width = kSegmentCols);
  static Level empty(int rows = kSegmentRows, int segment_width = kSegmentCols);

  int rows() const { return grid_.rows(); }
  int width() const { return grid_.cols(); }
  int segment_width() const { return segment_width_; }

  /// Number of whole segments, left to right.
  int segment_count() const { return segment_width_ > 0 ? width() / segment_width_ : 0; }
  Segment segment(int i) const;

  const TileGrid& grid() const { return grid_; }

  /// Concatenate a segment to the right edge (generation order).
  void append(const Segment& s);

  std::string serialize() const { return grid_.to_text(); }

  bool operator==(const Level&) const = default;

 private:
  TileGrid grid_;
  int segment_width_ = kSegmentCols;
};

/// Parse a plain-text tile grid (one character per tile, newline-separated
/// rows). Rejects ragged lines, unknown glyphs (naming glyph and position)
/// and a row count different from `expected_rows`.
Level parse_level(const std::string& text, const TileAlphabet& alpha = TileAlphabet::smb(),
                  int expected_rows = kSegmentRows, int segment_width = kSegmentCols);

/// Copies of the `width`-column windows at offsets 0, stride, 2*stride, ...
/// while offset + width fits in the grid.
std::vector<Segment> slice_segments(const Level& level, int width, int stride);

/// Element counts of one segment. A "gap" is a maximal run of columns whose
/// bottom-row tile is non-solid.
ElementCensus census(const Segment& s, const TileAlphabet& alpha = TileAlphabet::smb());

/// Functional form of Level::append.
Level concat(Level level, const Segment& s);

ElementCensus census_totals(const Level& level, const TileAlphabet& alpha = TileAlphabet::smb());

}  // namespace lf
