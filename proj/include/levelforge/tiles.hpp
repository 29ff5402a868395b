#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace lf {

enum class TileRole : std::uint8_t {
  Empty,
  Solid,
  Breakable,
  Question,
  Coin,
  Enemy,
  PipeTopLeft,
  PipeTopRight,
  PipeBodyLeft,
  PipeBodyRight,
  CannonHead,
  CannonBody,
};

/// Whether a tile of this role supports/blocks the play agent. Breakable,
/// question, pipe and cannon tiles all count as solid ground.
bool role_is_solid(TileRole role);

bool role_is_pipe(TileRole role);
bool role_is_cannon(TileRole role);

const char* role_name(TileRole role);
TileRole role_from_name(const std::string& name);  // throws ConfigError

/// Total glyph -> role mapping. Unknown glyphs are rejected at parse time.
class TileAlphabet {
 public:
  TileAlphabet();

  /// VGLC Super Mario Bros encoding:
  /// 'X' solid, 'S' breakable, '-' empty, '?'/'Q' question, 'o' coin,
  /// 'E' enemy, '<' '>' '[' ']' pipe parts, 'B' cannon head, 'b' cannon body.
  static const TileAlphabet& smb();

  /// Load a {"tiles": {"X": "solid", ...}} mapping.
  static TileAlphabet from_json_file(const std::string& path);
  static TileAlphabet from_json_text(const std::string& text);

  void add(char glyph, TileRole role);

  bool contains(char glyph) const { return roles_[index(glyph)] >= 0; }
  TileRole role_of(char glyph) const;  // throws DataError on unknown glyph
  bool solid(char glyph) const { return role_is_solid(role_of(glyph)); }

  /// First glyph declared for `role`; throws if the role has no glyph.
  char glyph_for(TileRole role) const;

  /// Glyphs in declaration order.
  const std::string& glyphs() const { return order_; }

 private:
  static std::size_t index(char glyph) { return static_cast<unsigned char>(glyph); }

  std::array<std::int8_t, 256> roles_;  // -1 = unknown
  std::string order_;
};

}  // namespace lf
