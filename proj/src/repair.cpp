#include "levelforge/repair.hpp"

namespace lf {

namespace {

bool below_supported(const Segment& s, const TileAlphabet& alpha, int r, int c) {
  return r == s.rows() - 1 || alpha.solid(s.at(r + 1, c));
}

}  // namespace

std::vector<FaultyTile> detect_faulty_tiles(const Segment& s, const TileAlphabet& alpha) {
  std::vector<FaultyTile> out;
  auto role_at = [&](int r, int c) { return alpha.role_of(s.at(r, c)); };

  for (int r = 0; r < s.rows(); ++r) {
    for (int c = 0; c < s.cols(); ++c) {
      const TileRole role = role_at(r, c);
      bool faulty = false;
      switch (role) {
        case TileRole::PipeTopLeft:
          faulty = c + 1 >= s.cols() || role_at(r, c + 1) != TileRole::PipeTopRight ||
                   !below_supported(s, alpha, r, c);
          break;
        case TileRole::PipeTopRight:
          faulty = c - 1 < 0 || role_at(r, c - 1) != TileRole::PipeTopLeft ||
                   !below_supported(s, alpha, r, c);
          break;
        case TileRole::PipeBodyLeft:
          faulty = c + 1 >= s.cols() || role_at(r, c + 1) != TileRole::PipeBodyRight ||
                   r - 1 < 0 ||
                   (role_at(r - 1, c) != TileRole::PipeTopLeft &&
                    role_at(r - 1, c) != TileRole::PipeBodyLeft) ||
                   !below_supported(s, alpha, r, c);
          break;
        case TileRole::PipeBodyRight:
          faulty = c - 1 < 0 || role_at(r, c - 1) != TileRole::PipeBodyLeft ||
                   r - 1 < 0 ||
                   (role_at(r - 1, c) != TileRole::PipeTopRight &&
                    role_at(r - 1, c) != TileRole::PipeBodyRight) ||
                   !below_supported(s, alpha, r, c);
          break;
        case TileRole::CannonBody:
          faulty = r - 1 < 0 || (role_at(r - 1, c) != TileRole::CannonHead &&
                                 role_at(r - 1, c) != TileRole::CannonBody);
          break;
        default:
          break;
      }
      if (faulty) out.push_back({r, c, s.at(r, c)});
    }
  }
  return out;
}

Segment repair(Segment s, const TileAlphabet& alpha) {
  const char empty = alpha.glyph_for(TileRole::Empty);
  const char top_left = alpha.glyph_for(TileRole::PipeTopLeft);
  const char top_right = alpha.glyph_for(TileRole::PipeTopRight);
  const char body_left = alpha.glyph_for(TileRole::PipeBodyLeft);
  const char body_right = alpha.glyph_for(TileRole::PipeBodyRight);
  auto role_at = [&](int r, int c) { return alpha.role_of(s.at(r, c)); };

  // Rule 1: complete broken top pairs when the partner cell is empty.
  for (int r = 0; r < s.rows(); ++r) {
    for (int c = 0; c < s.cols(); ++c) {
      const TileRole role = role_at(r, c);
      if (role == TileRole::PipeTopLeft && c + 1 < s.cols() && s.at(r, c + 1) == empty)
        s.at(r, c + 1) = top_right;
      else if (role == TileRole::PipeTopRight && c - 1 >= 0 && s.at(r, c - 1) == empty)
        s.at(r, c - 1) = top_left;
    }
  }

  // Rule 2: extend body pairs downward under every top pair until the pipe
  // rests on something solid or reaches the bottom.
  for (int r = 0; r < s.rows(); ++r) {
    for (int c = 0; c + 1 < s.cols(); ++c) {
      if (role_at(r, c) != TileRole::PipeTopLeft ||
          role_at(r, c + 1) != TileRole::PipeTopRight)
        continue;
      for (int rr = r + 1; rr < s.rows(); ++rr) {
        const bool left_body = role_at(rr, c) == TileRole::PipeBodyLeft;
        const bool right_body = role_at(rr, c + 1) == TileRole::PipeBodyRight;
        if (left_body && right_body) continue;
        const bool left_ok = left_body || s.at(rr, c) == empty;
        const bool right_ok = right_body || s.at(rr, c + 1) == empty;
        if (!left_ok || !right_ok) break;  // solid support or blocked
        if (s.at(rr, c) == empty) s.at(rr, c) = body_left;
        if (s.at(rr, c + 1) == empty) s.at(rr, c + 1) = body_right;
      }
    }
  }

  // Rule 3: delete orphans until nothing is faulty. Each pass clears at least
  // one tile, so this terminates.
  while (true) {
    const auto faults = detect_faulty_tiles(s, alpha);
    if (faults.empty()) break;
    for (const auto& f : faults) s.at(f.row, f.col) = empty;
  }
  return s;
}

}  // namespace lf
