#include "doctest.h"

#include "levelforge/errors.hpp"
#include "levelforge/player.hpp"
#include "test_util.hpp"

using namespace lf;

namespace {
const PhysicsParams kPhys;  // defaults: rise 4, air 10, control 1, gravity 1

TileGrid strip_of(const std::vector<lf::Segment>& segs) {
  TileGrid strip;
  for (const auto& s : segs) strip.append_columns(s);
  return strip;
}
}  // namespace

TEST_CASE("spawn_state stands atop the highest solid tile") {
  Segment s = testutil::flat_segment(2);  // rows 12-13 solid
  const AgentState ground = spawn_state(s, 3);
  CHECK(ground.row == 11);
  CHECK(ground.phase == AirPhase::Grounded);

  s.at(5, 6) = 'X';  // floating platform above the ground
  CHECK(spawn_state(s, 6).row == 4);

  Segment hollow(14, 14, '-');
  CHECK_THROWS_AS(spawn_state(hollow, 0), RuntimeFailure);
}

TEST_CASE("flat strip is walkable to the right edge") {
  const TileGrid strip = strip_of({testutil::flat_segment(2), testutil::flat_segment(2),
                                   testutil::flat_segment(2), testutil::flat_segment(2)});
  const PlayResult res = test_playability(strip, spawn_state(strip, 0), kPhys);
  CHECK(res.playable);
  REQUIRE(res.end_state.has_value());
  CHECK(res.end_state->col == strip.cols() - 1);
  CHECK(res.visited_states > 0);
}

TEST_CASE("wall higher than the jump rise blocks the level") {
  Segment wall = testutil::flat_segment(2);
  for (int r = 0; r < 12; ++r) wall.at(r, 7) = 'X';  // full-height wall
  const TileGrid strip = strip_of({testutil::flat_segment(2), wall});
  CHECK_FALSE(test_playability(strip, spawn_state(strip, 0), kPhys).playable);

  // A 4-high wall is exactly clearable with rise 4.
  Segment low_wall = testutil::flat_segment(2);
  for (int r = 8; r < 12; ++r) low_wall.at(r, 7) = 'X';
  const TileGrid ok = strip_of({testutil::flat_segment(2), low_wall});
  CHECK(test_playability(ok, spawn_state(ok, 0), kPhys).playable);

  // A 5-high wall is not.
  Segment high_wall = testutil::flat_segment(2);
  for (int r = 7; r < 12; ++r) high_wall.at(r, 7) = 'X';
  const TileGrid bad = strip_of({testutil::flat_segment(2), high_wall});
  CHECK_FALSE(test_playability(bad, spawn_state(bad, 0), kPhys).playable);
}

TEST_CASE("a 12-wide bottomless gap exceeds the jump range") {
  Segment gap = testutil::flat_segment(2);
  for (int c = 1; c < 13; ++c) {
    gap.at(12, c) = '-';
    gap.at(13, c) = '-';
  }
  const TileGrid strip = strip_of({testutil::flat_segment(2), gap});
  CHECK_FALSE(test_playability(strip, spawn_state(strip, 0), kPhys).playable);

  // A 6-wide gap is comfortably jumpable.
  Segment small_gap = testutil::flat_segment(2);
  for (int c = 4; c < 10; ++c) {
    small_gap.at(12, c) = '-';
    small_gap.at(13, c) = '-';
  }
  const TileGrid ok = strip_of({testutil::flat_segment(2), small_gap});
  CHECK(test_playability(ok, spawn_state(ok, 0), kPhys).playable);
}

TEST_CASE("a staircase of +1 steps is climbable") {
  Segment stairs(14, 14, '-');
  for (int c = 0; c < 14; ++c) {
    const int height = std::min(2 + c, 12);
    for (int r = 14 - height; r < 14; ++r) stairs.at(r, c) = 'X';
  }
  const TileGrid strip = strip_of({testutil::flat_segment(2), stairs});
  CHECK(test_playability(strip, spawn_state(strip, 0), kPhys).playable);
}

TEST_CASE("search is deterministic and validates the start") {
  lf::Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const Level level = testutil::random_level(rng, 3);
    const TileGrid strip = level.grid();
    AgentState start;
    try {
      start = spawn_state(strip, 0);
    } catch (const RuntimeFailure&) {
      continue;
    }
    const PlayResult a = test_playability(strip, start, kPhys);
    const PlayResult b = test_playability(strip, start, kPhys);
    CHECK(a.playable == b.playable);
    CHECK(a.visited_states == b.visited_states);
    if (a.playable) CHECK(*a.end_state == *b.end_state);
  }

  const TileGrid strip = testutil::flat_segment(2);
  AgentState bad;
  bad.col = 0;
  bad.row = 13;  // inside solid ground
  CHECK_THROWS_AS(test_playability(strip, bad, kPhys), std::invalid_argument);
  AgentState floating;
  floating.col = 0;
  floating.row = 5;  // grounded but no support
  CHECK_THROWS_AS(test_playability(strip, floating, kPhys), std::invalid_argument);
}

TEST_CASE("filling bottom-row holes never hurts playability") {
  lf::Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    Level level = testutil::random_level(rng, 2);
    TileGrid strip = level.grid();
    AgentState start;
    try {
      start = spawn_state(strip, 0);
    } catch (const RuntimeFailure&) {
      continue;
    }
    const bool before = test_playability(strip, start, kPhys).playable;

    TileGrid filled = strip;
    for (int c = 0; c < filled.cols(); ++c) filled.at(filled.rows() - 1, c) = 'X';
    const bool after =
        test_playability(filled, spawn_state(filled, start.col), kPhys).playable;
    if (before) CHECK(after);
  }
}

TEST_CASE("trace dump follows reachable states to the end") {
  const TileGrid strip = strip_of({testutil::flat_segment(2), testutil::flat_segment(2)});
  std::vector<AgentState> trace;
  const PlayResult res =
      test_playability(strip, spawn_state(strip, 0), kPhys, TileAlphabet::smb(), &trace);
  REQUIRE(res.playable);
  REQUIRE_FALSE(trace.empty());
  CHECK(trace.front() == spawn_state(strip, 0));
  CHECK(trace.back().col == strip.cols() - 1);
  CHECK_FALSE(format_trace(trace).empty());
}

TEST_CASE("playability_reward counts completed segments") {
  CHECK(playability_reward(0) == 0.0);
  CHECK(playability_reward(97) == 97.0);
  CHECK(playability_reward(100) == 100.0);
}
