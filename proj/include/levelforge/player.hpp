#pragma once

#include <optional>
#include <vector>

#include "levelforge/level.hpp"

namespace lf {

/// Tick-model parameters of the test agent.
struct PhysicsParams {
  int max_jump_rise = 4;         // rows gained by one jump
  int max_air_steps = 10;        // airborne ticks before the jump is spent
  int horizontal_air_control = 1;  // columns of drift per airborne tick
  int gravity = 1;               // rows of descent per falling tick

  void validate(int rows) const;  // throws ConfigError
};

enum class AirPhase : std::uint8_t { Grounded, Rising, Falling };

/// One-tile agent position inside a strip (or, when chaining, a level).
struct AgentState {
  int col = 0;
  int row = 0;
  AirPhase phase = AirPhase::Grounded;
  int rise_ticks = 0;  // rise ticks already taken; meaningful while Rising

  bool operator==(const AgentState&) const = default;
};

struct PlayResult {
  bool playable = false;
  std::optional<AgentState> end_state;  // a state in the right-most column
  long visited_states = 0;
};

/// Grounded state in `col` atop the highest solid tile: the smallest row whose
/// cell is passable and whose cell below is solid. Throws RuntimeFailure if
/// the column offers no footing.
AgentState spawn_state(const TileGrid& strip, int col,
                       const TileAlphabet& alpha = TileAlphabet::smb());

/// Exhaustive search over the tick model. Playable iff any state in the strip's
/// right-most column is reachable; the reported end state is the reachable
/// goal state with the smallest (row, phase). Falling below the bottom row
/// kills the branch. If `trace` is given it receives one path to the end state.
PlayResult test_playability(const TileGrid& strip, const AgentState& start,
                            const PhysicsParams& phys,
                            const TileAlphabet& alpha = TileAlphabet::smb(),
                            std::vector<AgentState>* trace = nullptr);

/// Episode-level playability metric: the number of completed segments.
inline double playability_reward(int segments_completed) {
  return static_cast<double>(segments_completed);
}

std::string format_trace(const std::vector<AgentState>& trace);

}  // namespace lf
