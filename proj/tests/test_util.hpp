#pragma once

#include <string>
#include <vector>

#include "levelforge/generator.hpp"
#include "levelforge/level.hpp"
#include "levelforge/rng.hpp"

namespace testutil {

/// Build a segment/grid from glyph rows (all rows must have equal length).
inline lf::TileGrid grid_from(const std::vector<std::string>& rows) {
  lf::TileGrid g(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c) g.at(r, c) = rows[r][c];
  return g;
}

/// 14x14 segment with flat ground of the given height.
inline lf::Segment flat_segment(int ground_height = 2) {
  lf::Segment s(lf::kSegmentRows, lf::kSegmentCols, '-');
  for (int r = lf::kSegmentRows - ground_height; r < lf::kSegmentRows; ++r)
    for (int c = 0; c < lf::kSegmentCols; ++c) s.at(r, c) = 'X';
  return s;
}

/// Random segment over the full SMB glyph set (arbitrary, possibly broken).
inline lf::Segment random_segment(lf::Rng& rng) {
  static const std::string glyphs = "-XS?QoE<>[]Bb";
  lf::Segment s(lf::kSegmentRows, lf::kSegmentCols, '-');
  for (int r = 0; r < s.rows(); ++r)
    for (int c = 0; c < s.cols(); ++c) {
      // Bias toward empties so structures are sparse like decoded segments.
      if (rng.uniform01() < 0.6) continue;
      s.at(r, c) = glyphs[static_cast<std::size_t>(rng.below(glyphs.size()))];
    }
  return s;
}

/// Random level of `n` procedurally decoded segments (always well-formed).
inline lf::Level random_level(lf::Rng& rng, int n) {
  lf::Level level = lf::Level::empty();
  for (int i = 0; i < n; ++i) level.append(lf::procedural_decode(lf::uniform_latent(rng)));
  return level;
}

}  // namespace testutil
