#include "levelforge/player.hpp"

#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "levelforge/errors.hpp"

namespace lf {

void PhysicsParams::validate(int rows) const {
  if (max_jump_rise < 1 || max_air_steps < 1 || horizontal_air_control < 1 || gravity < 1)
    throw ConfigError("physics parameters must be positive");
  if (max_jump_rise > rows - 1)
    throw ConfigError("max_jump_rise must be at most rows - 1");
}

AgentState spawn_state(const TileGrid& strip, int col, const TileAlphabet& alpha) {
  if (col < 0 || col >= strip.cols()) throw std::invalid_argument("spawn column out of range");
  for (int r = 0; r + 1 < strip.rows(); ++r) {
    if (!alpha.solid(strip.at(r, col)) && alpha.solid(strip.at(r + 1, col)))
      return AgentState{col, r, AirPhase::Grounded, 0};
  }
  throw RuntimeFailure("no spawn position in column " + std::to_string(col));
}

namespace {

// Search node: AgentState plus the airborne ticks consumed so far. Nodes with
// equal (col, row, phase) dominate on minimal air use.
struct Node {
  AgentState st;
  int air = 0;
};

class Search {
 public:
  Search(const TileGrid& strip, const PhysicsParams& phys, const TileAlphabet& alpha,
         bool want_trace)
      : strip_(strip), phys_(phys), alpha_(alpha), want_trace_(want_trace),
        phases_(phys.max_jump_rise + 2),
        best_air_(static_cast<std::size_t>(strip.cols()) * strip.rows() * phases_,
                  std::numeric_limits<int>::max()),
        parent_(want_trace ? best_air_.size() : 0, -1) {}

  PlayResult run(const AgentState& start, std::vector<AgentState>* trace) {
    push(normalize(Node{start, 0}), -1);
    while (!queue_.empty()) {
      const Node node = queue_.front();
      queue_.pop_front();
      const int id = state_id(node.st);
      if (node.air > best_air_[id]) continue;  // stale entry
      ++visited_;
      expand(node);
    }

    PlayResult result;
    result.visited_states = visited_;
    const int goal_col = strip_.cols() - 1;
    int best_id = -1;
    AgentState best_state;
    for (int row = 0; row < strip_.rows() && best_id < 0; ++row) {
      for (int phase = 0; phase < phases_ && best_id < 0; ++phase) {
        const AgentState st = state_from(goal_col, row, phase);
        const int id = state_id(st);
        if (best_air_[id] != std::numeric_limits<int>::max()) {
          best_id = id;
          best_state = st;
        }
      }
    }
    if (best_id >= 0) {
      result.playable = true;
      result.end_state = best_state;
      if (want_trace_ && trace) *trace = backtrack(best_id);
    }
    return result;
  }

 private:
  bool solid(int r, int c) const { return alpha_.solid(strip_.at(r, c)); }

  // Phase encoding: 0 grounded, 1..max_rise rising with t = index - 1, last falling.
  int phase_index(const AgentState& st) const {
    switch (st.phase) {
      case AirPhase::Grounded:
        return 0;
      case AirPhase::Rising:
        return 1 + st.rise_ticks;
      case AirPhase::Falling:
        return phases_ - 1;
    }
    return 0;
  }

  AgentState state_from(int col, int row, int phase) const {
    AgentState st;
    st.col = col;
    st.row = row;
    if (phase == 0) {
      st.phase = AirPhase::Grounded;
    } else if (phase == phases_ - 1) {
      st.phase = AirPhase::Falling;
    } else {
      st.phase = AirPhase::Rising;
      st.rise_ticks = phase - 1;
    }
    return st;
  }

  int state_id(const AgentState& st) const {
    return (st.col * strip_.rows() + st.row) * phases_ + phase_index(st);
  }

  /// Collapse zero-tick transitions: a spent or blocked jump becomes falling,
  /// and falling with solid footing below lands.
  Node normalize(Node n) const {
    if (n.st.phase == AirPhase::Rising && n.st.rise_ticks >= phys_.max_jump_rise)
      n.st.phase = AirPhase::Falling;
    if (n.st.phase == AirPhase::Falling && n.st.row + 1 < strip_.rows() &&
        solid(n.st.row + 1, n.st.col)) {
      n.st.phase = AirPhase::Grounded;
      n.air = 0;
    }
    if (n.st.phase != AirPhase::Rising) n.st.rise_ticks = 0;
    if (n.st.phase == AirPhase::Grounded) n.air = 0;
    return n;
  }

  void push(Node n, int from_id) {
    const int id = state_id(n.st);
    if (n.air >= best_air_[id]) return;
    best_air_[id] = n.air;
    if (want_trace_) parent_[id] = from_id;
    queue_.push_back(n);
  }

  void expand(const Node& node) {
    const AgentState& st = node.st;
    const int from = state_id(st);
    const int rows = strip_.rows();
    const int cols = strip_.cols();

    switch (st.phase) {
      case AirPhase::Grounded: {
        for (int dc : {-1, +1}) {
          const int nc = st.col + dc;
          if (nc < 0 || nc >= cols) continue;
          if (solid(st.row, nc)) continue;
          if (st.row + 1 >= rows || !solid(st.row + 1, nc)) continue;
          push(Node{AgentState{nc, st.row, AirPhase::Grounded, 0}, 0}, from);
        }
        push(normalize(Node{AgentState{st.col, st.row, AirPhase::Rising, 0}, 0}), from);
        break;
      }
      case AirPhase::Rising: {
        if (st.row - 1 < 0 || solid(st.row - 1, st.col)) {
          push(normalize(Node{AgentState{st.col, st.row, AirPhase::Falling, 0}, node.air}),
               from);
          break;
        }
        if (node.air + 1 > phys_.max_air_steps) break;  // jump spent mid-air
        for (int dc = -phys_.horizontal_air_control; dc <= phys_.horizontal_air_control;
             ++dc) {
          const int nc = st.col + dc;
          if (nc < 0 || nc >= cols) continue;
          if (dc != 0 && solid(st.row - 1, nc)) continue;
          push(normalize(Node{
                   AgentState{nc, st.row - 1, AirPhase::Rising, st.rise_ticks + 1},
                   node.air + 1}),
               from);
        }
        break;
      }
      case AirPhase::Falling: {
        if (node.air + 1 > phys_.max_air_steps) break;
        for (int dc = -phys_.horizontal_air_control; dc <= phys_.horizontal_air_control;
             ++dc) {
          const int nc = st.col + dc;
          if (nc < 0 || nc >= cols) continue;
          // One tick of descent: the first row may carry the drift, further
          // rows (gravity > 1) go straight down until blocked.
          int row = st.row;
          int col = st.col;
          bool dead = false;
          for (int step = 0; step < phys_.gravity; ++step) {
            const int target_col = step == 0 ? nc : col;
            if (row + 1 >= rows) {
              dead = true;  // fell past the bottom row
              break;
            }
            if (solid(row + 1, target_col)) break;
            row += 1;
            col = target_col;
          }
          if (dead || (row == st.row && col == st.col)) continue;
          push(normalize(Node{AgentState{col, row, AirPhase::Falling, 0}, node.air + 1}),
               from);
        }
        break;
      }
    }
  }

  std::vector<AgentState> backtrack(int id) const {
    std::vector<AgentState> path;
    while (id >= 0) {
      path.push_back(state_from((id / phases_) / strip_.rows(),
                                (id / phases_) % strip_.rows(), id % phases_));
      id = parent_[id];
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  const TileGrid& strip_;
  const PhysicsParams& phys_;
  const TileAlphabet& alpha_;
  bool want_trace_;
  int phases_;
  std::vector<int> best_air_;
  std::vector<int> parent_;
  std::deque<Node> queue_;
  long visited_ = 0;
};

}  // namespace

PlayResult test_playability(const TileGrid& strip, const AgentState& start,
                            const PhysicsParams& phys, const TileAlphabet& alpha,
                            std::vector<AgentState>* trace) {
  phys.validate(strip.rows());
  if (!strip.in_bounds(start.row, start.col))
    throw std::invalid_argument("start state out of bounds");
  if (alpha.solid(strip.at(start.row, start.col)))
    throw std::invalid_argument("start state inside a solid tile");
  if (start.phase == AirPhase::Grounded &&
      (start.row + 1 >= strip.rows() || !alpha.solid(strip.at(start.row + 1, start.col))))
    throw std::invalid_argument("grounded start without solid support");
  if (start.phase == AirPhase::Rising &&
      (start.rise_ticks < 0 || start.rise_ticks > phys.max_jump_rise))
    throw std::invalid_argument("rise_ticks out of range");

  Search search(strip, phys, alpha, trace != nullptr);
  return search.run(start, trace);
}

std::string format_trace(const std::vector<AgentState>& trace) {
  std::ostringstream os;
  for (const auto& st : trace) {
    os << st.col << ',' << st.row << ',';
    switch (st.phase) {
      case AirPhase::Grounded: os << "grounded"; break;
      case AirPhase::Rising: os << "rising(" << st.rise_ticks << ")"; break;
      case AirPhase::Falling: os << "falling"; break;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace lf
