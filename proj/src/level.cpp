#include "levelforge/level.hpp"

#include <stdexcept>

#include "levelforge/errors.hpp"

namespace lf {

Level::Level(TileGrid grid, int segment_width)
    : grid_(std::move(grid)), segment_width_(segment_width) {
  if (segment_width_ <= 0) throw std::invalid_argument("segment width must be positive");
}

Level Level::empty(int rows, int segment_width) {
  Level lvl;
  lvl.grid_ = TileGrid(rows, 0);
  lvl.segment_width_ = segment_width;
  return lvl;
}

Segment Level::segment(int i) const {
  if (i < 0 || i >= segment_count()) throw std::out_of_range("segment index out of range");
  return grid_.window(0, i * segment_width_, rows(), segment_width_);
}

void Level::append(const Segment& s) {
  if (s.rows() != rows() || s.cols() != segment_width_)
    throw std::invalid_argument("segment dimensions do not match level");
  grid_.append_columns(s);
}

Level parse_level(const std::string& text, const TileAlphabet& alpha, int expected_rows,
                  int segment_width) {
  std::vector<std::string> lines;
  std::string line;
  for (char ch : text) {
    if (ch == '\n') {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
      line.clear();
    } else {
      line.push_back(ch);
    }
  }
  if (!line.empty()) {
    if (line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }

  if (static_cast<int>(lines.size()) != expected_rows)
    throw DataError("expected " + std::to_string(expected_rows) + " rows, got " +
                    std::to_string(lines.size()));

  const std::size_t cols = lines[0].size();
  if (cols == 0) throw DataError("level has empty rows");
  for (std::size_t r = 0; r < lines.size(); ++r) {
    if (lines[r].size() != cols)
      throw DataError("ragged line: row " + std::to_string(r) + " has " +
                      std::to_string(lines[r].size()) + " columns, expected " +
                      std::to_string(cols));
    for (std::size_t c = 0; c < cols; ++c) {
      if (!alpha.contains(lines[r][c]))
        throw DataError(std::string("unknown glyph '") + lines[r][c] + "' at row " +
                        std::to_string(r) + ", column " + std::to_string(c));
    }
  }

  TileGrid grid(expected_rows, static_cast<int>(cols));
  for (int r = 0; r < expected_rows; ++r)
    for (int c = 0; c < static_cast<int>(cols); ++c) grid.at(r, c) = lines[r][c];
  return Level(std::move(grid), segment_width);
}

std::vector<Segment> slice_segments(const Level& level, int width, int stride) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  if (width > level.width())
    throw std::invalid_argument("slice width " + std::to_string(width) +
                                " exceeds grid width " + std::to_string(level.width()));
  std::vector<Segment> out;
  for (int offset = 0; offset + width <= level.width(); offset += stride)
    out.push_back(level.grid().window(0, offset, level.rows(), width));
  return out;
}

ElementCensus census(const Segment& s, const TileAlphabet& alpha) {
  ElementCensus out;
  const int bottom = s.rows() - 1;
  bool in_gap = false;
  for (int c = 0; c < s.cols(); ++c) {
    const bool gap_col = !alpha.solid(s.at(bottom, c));
    if (gap_col && !in_gap) ++out.gaps;
    in_gap = gap_col;
  }
  for (int r = 0; r < s.rows(); ++r) {
    for (int c = 0; c < s.cols(); ++c) {
      switch (alpha.role_of(s.at(r, c))) {
        case TileRole::PipeTopLeft:
          ++out.pipes;
          break;
        case TileRole::Enemy:
          ++out.enemies;
          break;
        case TileRole::CannonHead:
          ++out.bullets;
          break;
        case TileRole::Coin:
          ++out.coins;
          break;
        case TileRole::Question:
          ++out.question_marks;
          break;
        default:
          break;
      }
    }
  }
  return out;
}

Level concat(Level level, const Segment& s) {
  level.append(s);
  return level;
}

ElementCensus census_totals(const Level& level, const TileAlphabet& alpha) {
  ElementCensus total;
  for (int i = 0; i < level.segment_count(); ++i) total += census(level.segment(i), alpha);
  return total;
}

}  // namespace lf
