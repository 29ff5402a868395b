#pragma once

#include <vector>

#include "levelforge/level.hpp"

namespace lf {

struct FaultyTile {
  int row = 0;
  int col = 0;
  char glyph = '-';
  bool operator==(const FaultyTile&) const = default;
};

/// All pipe/cannon tiles violating adjacency constraints, in row-major order:
/// top pairs must be complete ('<' next to '>'), body pairs complete and under
/// pipe tiles, pipe columns supported by solid tiles or the segment bottom,
/// and cannon bodies must sit under a cannon head or body.
std::vector<FaultyTile> detect_faulty_tiles(const Segment& s,
                                            const TileAlphabet& alpha = TileAlphabet::smb());

/// Deterministic rule pipeline: (1) complete broken top pairs into empty
/// cells, (2) extend body pairs downward through empty cells until solid
/// support or the bottom, (3) delete whatever cannot be legalized. The result
/// always passes detect_faulty_tiles, and repairing twice changes nothing.
Segment repair(Segment s, const TileAlphabet& alpha = TileAlphabet::smb());

}  // namespace lf
