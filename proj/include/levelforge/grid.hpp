#pragma once

#include <cassert>
#include <string>

namespace lf {

/// Row-major character matrix; row 0 is the top of the screen.
class TileGrid {
 public:
  TileGrid() = default;
  TileGrid(int rows, int cols, char fill = '-')
      : rows_(rows), cols_(cols), cells_(static_cast<std::size_t>(rows) * cols, fill) {
    assert(rows >= 0 && cols >= 0);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  char at(int r, int c) const {
    assert(in_bounds(r, c));
    return cells_[static_cast<std::size_t>(r) * cols_ + c];
  }
  char& at(int r, int c) {
    assert(in_bounds(r, c));
    return cells_[static_cast<std::size_t>(r) * cols_ + c];
  }

  bool in_bounds(int r, int c) const { return r >= 0 && r < rows_ && c >= 0 && c < cols_; }

  /// Copy of the `rows x cols` window with top-left corner (r0, c0).
  TileGrid window(int r0, int c0, int rows, int cols) const {
    assert(r0 >= 0 && c0 >= 0 && r0 + rows <= rows_ && c0 + cols <= cols_);
    TileGrid out(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) out.at(r, c) = at(r0 + r, c0 + c);
    return out;
  }

  /// Append `other` to the right edge; row counts must match.
  void append_columns(const TileGrid& other) {
    if (rows_ == 0 && cols_ == 0) {
      *this = other;
      return;
    }
    assert(other.rows() == rows_);
    TileGrid out(rows_, cols_ + other.cols());
    for (int r = 0; r < rows_; ++r) {
      for (int c = 0; c < cols_; ++c) out.at(r, c) = at(r, c);
      for (int c = 0; c < other.cols(); ++c) out.at(r, cols_ + c) = other.at(r, c);
    }
    *this = std::move(out);
  }

  /// Rows joined with '\n', including a trailing newline.
  std::string to_text() const {
    std::string out;
    out.reserve(cells_.size() + rows_);
    for (int r = 0; r < rows_; ++r) {
      out.append(cells_, static_cast<std::size_t>(r) * cols_, cols_);
      out.push_back('\n');
    }
    return out;
  }

  const std::string& cells() const { return cells_; }

  bool operator==(const TileGrid&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::string cells_;
};

/// A level segment: a fixed-size tile window (14x14 by default).
using Segment = TileGrid;

}  // namespace lf
