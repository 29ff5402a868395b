#pragma once

#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "levelforge/generator.hpp"
#include "levelforge/metrics.hpp"
#include "levelforge/normalizer.hpp"
#include "levelforge/player.hpp"
#include "levelforge/policy.hpp"
#include "levelforge/repair.hpp"

namespace lf {

enum class RewardComponent { F, H, P };

const char* reward_component_name(RewardComponent c);
RewardComponent reward_component_from_name(const std::string& name);

struct RewardConfig {
  std::vector<RewardComponent> components{RewardComponent::F, RewardComponent::H,
                                          RewardComponent::P};
  int normalizer_window = 1000;

  bool has(RewardComponent c) const;
  void validate() const;
};

/// Sum of the configured components. F and H are pushed through their min-max
/// normalizers; P contributes its raw per-step value (1 per playable step), so
/// the episode sum equals the number of completed segments.
double compose_reward(const std::map<RewardComponent, double>& raw,
                      std::map<RewardComponent, RunningNormalizer>& normalizers,
                      const RewardConfig& cfg);

/// Everything a candidate action produced, before committing it to the level.
struct Candidate {
  Latent action;
  Segment raw;
  Segment repaired;
  int faulty_before = 0;
  int faulty_after = 0;
  bool playable = false;
  AgentState end_state;  // level coordinates; valid when playable
  long visited_states = 0;
  double d = 0.0, f = 0.0, h = 0.0;
  ElementCensus census;
};

struct StepInfo {
  bool playable = false;
  bool truncated = false;  // done because the segment cap was reached
  double raw_d = 0.0, raw_f = 0.0, raw_h = 0.0;
  ElementCensus census;
};

/// The level-design MDP: actions are latent vectors, the next state is the
/// action itself, and rewards score the decoded segment. Playability is tested
/// on the strip of up to 4 trailing segments, with the agent starting from its
/// previous ending position.
class DesignEnv {
 public:
  DesignEnv(const GeneratorBackend& backend, MetricConfig metrics, RewardConfig reward,
            PhysicsParams physics, int max_segments, std::uint64_t seed,
            const TileAlphabet& alpha = TileAlphabet::smb());

  /// Sample playable initial segments until one passes (cap 1000 tries).
  Latent reset();

  struct StepResult {
    Latent next_state;
    double reward = 0.0;
    bool done = false;
    StepInfo info;
  };
  StepResult step(const Latent& action);

  /// Evaluate an action without committing it.
  Candidate propose(const Latent& action) const;
  /// Append a playable candidate and advance the state.
  void commit(const Candidate& cand);
  /// Append an unplayable candidate anyway (evaluation without a P component):
  /// the test chain restarts from a spawn point in the next strip.
  void commit_unplayable(const Candidate& cand);

  const Level& level() const { return level_; }
  const Latent& current_latent() const { return current_latent_; }
  int segments_done() const { return segments_done_; }
  int max_segments() const { return max_segments_; }
  bool done() const { return done_; }
  const MetricConfig& metrics() const { return metrics_; }
  const RewardConfig& reward_config() const { return reward_; }

  std::map<RewardComponent, RunningNormalizer>& normalizers() { return normalizers_; }
  Rng& rng() { return rng_; }

  static constexpr int kStripSegments = 4;
  static constexpr int kResetCap = 1000;

 private:
  TileGrid make_strip(const Segment& next, int* strip_offset_cols) const;

  const GeneratorBackend* backend_;
  const TileAlphabet* alpha_;
  MetricConfig metrics_;
  RewardConfig reward_;
  PhysicsParams physics_;
  int max_segments_;
  Rng rng_;

  Level level_;
  std::deque<PatternDistribution> history_;  // newest last, bounded
  int history_cap_ = 0;
  Latent current_latent_ = Latent::Zero();
  std::optional<AgentState> end_state_;  // level coordinates; empty after a break
  int segments_done_ = 0;
  bool done_ = true;  // must reset() first
  std::map<RewardComponent, RunningNormalizer> normalizers_;
};

}  // namespace lf
