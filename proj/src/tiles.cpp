#include "levelforge/tiles.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "levelforge/errors.hpp"

namespace lf {

bool role_is_solid(TileRole role) {
  switch (role) {
    case TileRole::Solid:
    case TileRole::Breakable:
    case TileRole::Question:
    case TileRole::PipeTopLeft:
    case TileRole::PipeTopRight:
    case TileRole::PipeBodyLeft:
    case TileRole::PipeBodyRight:
    case TileRole::CannonHead:
    case TileRole::CannonBody:
      return true;
    case TileRole::Empty:
    case TileRole::Coin:
    case TileRole::Enemy:
      return false;
  }
  return false;
}

bool role_is_pipe(TileRole role) {
  return role == TileRole::PipeTopLeft || role == TileRole::PipeTopRight ||
         role == TileRole::PipeBodyLeft || role == TileRole::PipeBodyRight;
}

bool role_is_cannon(TileRole role) {
  return role == TileRole::CannonHead || role == TileRole::CannonBody;
}

namespace {

struct RoleName {
  const char* name;
  TileRole role;
};

constexpr RoleName kRoleNames[] = {
    {"empty", TileRole::Empty},
    {"solid", TileRole::Solid},
    {"breakable", TileRole::Breakable},
    {"question", TileRole::Question},
    {"coin", TileRole::Coin},
    {"enemy", TileRole::Enemy},
    {"pipe-top-left", TileRole::PipeTopLeft},
    {"pipe-top-right", TileRole::PipeTopRight},
    {"pipe-body-left", TileRole::PipeBodyLeft},
    {"pipe-body-right", TileRole::PipeBodyRight},
    {"cannon-head", TileRole::CannonHead},
    {"cannon-body", TileRole::CannonBody},
};

}  // namespace

const char* role_name(TileRole role) {
  for (const auto& rn : kRoleNames)
    if (rn.role == role) return rn.name;
  return "?";
}

TileRole role_from_name(const std::string& name) {
  for (const auto& rn : kRoleNames)
    if (name == rn.name) return rn.role;
  throw ConfigError("unknown tile role '" + name + "'");
}

TileAlphabet::TileAlphabet() { roles_.fill(-1); }

const TileAlphabet& TileAlphabet::smb() {
  static const TileAlphabet alpha = [] {
    TileAlphabet a;
    a.add('-', TileRole::Empty);
    a.add('X', TileRole::Solid);
    a.add('S', TileRole::Breakable);
    a.add('?', TileRole::Question);
    a.add('Q', TileRole::Question);
    a.add('o', TileRole::Coin);
    a.add('E', TileRole::Enemy);
    a.add('<', TileRole::PipeTopLeft);
    a.add('>', TileRole::PipeTopRight);
    a.add('[', TileRole::PipeBodyLeft);
    a.add(']', TileRole::PipeBodyRight);
    a.add('B', TileRole::CannonHead);
    a.add('b', TileRole::CannonBody);
    return a;
  }();
  return alpha;
}

TileAlphabet TileAlphabet::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("alphabet file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("tiles") || !j["tiles"].is_object())
    throw ConfigError("alphabet file must be an object with a \"tiles\" mapping");
  for (const auto& [key, value] : j.items())
    if (key != "tiles") throw ConfigError("unknown key '" + key + "' in alphabet file");

  TileAlphabet a;
  for (const auto& [glyph, role] : j["tiles"].items()) {
    if (glyph.size() != 1)
      throw ConfigError("tile glyph '" + glyph + "' must be a single character");
    if (!role.is_string())
      throw ConfigError("role for glyph '" + glyph + "' must be a string");
    a.add(glyph[0], role_from_name(role.get<std::string>()));
  }
  if (a.glyphs().empty()) throw ConfigError("alphabet file declares no tiles");
  return a;
}

TileAlphabet TileAlphabet::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open alphabet file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void TileAlphabet::add(char glyph, TileRole role) {
  if (contains(glyph))
    throw ConfigError(std::string("glyph '") + glyph + "' declared twice");
  roles_[index(glyph)] = static_cast<std::int8_t>(role);
  order_.push_back(glyph);
}

TileRole TileAlphabet::role_of(char glyph) const {
  const std::int8_t r = roles_[index(glyph)];
  if (r < 0) throw DataError(std::string("unknown glyph '") + glyph + "'");
  return static_cast<TileRole>(r);
}

char TileAlphabet::glyph_for(TileRole role) const {
  for (char g : order_)
    if (role_of(g) == role) return g;
  throw ConfigError(std::string("alphabet has no glyph for role ") + role_name(role));
}

}  // namespace lf
