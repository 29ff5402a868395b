#include "levelforge/env.hpp"

#include <cmath>
#include <stdexcept>

#include "levelforge/errors.hpp"

namespace lf {

const char* reward_component_name(RewardComponent c) {
  switch (c) {
    case RewardComponent::F: return "F";
    case RewardComponent::H: return "H";
    case RewardComponent::P: return "P";
  }
  return "?";
}

RewardComponent reward_component_from_name(const std::string& name) {
  if (name == "F") return RewardComponent::F;
  if (name == "H") return RewardComponent::H;
  if (name == "P") return RewardComponent::P;
  throw ConfigError("unknown reward component '" + name + "' (expected F, H or P)");
}

bool RewardConfig::has(RewardComponent c) const {
  for (RewardComponent x : components)
    if (x == c) return true;
  return false;
}

void RewardConfig::validate() const {
  if (components.empty()) throw ConfigError("reward needs at least one component");
  if (normalizer_window < 1) throw ConfigError("normalizer window must be >= 1");
  for (std::size_t i = 0; i < components.size(); ++i)
    for (std::size_t j = i + 1; j < components.size(); ++j)
      if (components[i] == components[j])
        throw ConfigError("duplicate reward component");
}

double compose_reward(const std::map<RewardComponent, double>& raw,
                      std::map<RewardComponent, RunningNormalizer>& normalizers,
                      const RewardConfig& cfg) {
  double sum = 0.0;
  for (RewardComponent c : cfg.components) {
    const auto it = raw.find(c);
    if (it == raw.end())
      throw std::invalid_argument(std::string("missing reward component ") +
                                  reward_component_name(c));
    if (c == RewardComponent::P) {
      sum += it->second;  // already a per-step count, not normalized
    } else {
      sum += normalizers.at(c).push_and_normalize(it->second);
    }
  }
  return sum;
}

DesignEnv::DesignEnv(const GeneratorBackend& backend, MetricConfig metrics,
                     RewardConfig reward, PhysicsParams physics, int max_segments,
                     std::uint64_t seed, const TileAlphabet& alpha)
    : backend_(&backend), alpha_(&alpha), metrics_(metrics), reward_(reward),
      physics_(physics), max_segments_(max_segments), rng_(seed) {
  metrics_.validate();
  reward_.validate();
  physics_.validate(metrics_.window_rows);
  if (max_segments_ < 1) throw ConfigError("max_segments must be >= 1");
  const int span = metrics_.history_windows * metrics_.window_stride;
  history_cap_ = std::max(metrics_.memory_size,
                          (span + metrics_.window_cols - 1) / metrics_.window_cols);
  for (RewardComponent c : reward_.components)
    if (c != RewardComponent::P)
      normalizers_.emplace(c, RunningNormalizer(reward_.normalizer_window));
}

Latent DesignEnv::reset() {
  level_ = Level::empty(metrics_.window_rows, metrics_.window_cols);
  history_.clear();
  end_state_.reset();
  segments_done_ = 0;

  for (int attempt = 0; attempt < kResetCap; ++attempt) {
    const Latent z = uniform_latent(rng_);
    const Segment seg = repair(backend_->generate(z), *alpha_);
    AgentState start;
    try {
      start = spawn_state(seg, 0, *alpha_);
    } catch (const RuntimeFailure&) {
      continue;  // no footing in the first column
    }
    const PlayResult res = test_playability(seg, start, physics_, *alpha_);
    if (!res.playable) continue;

    level_.append(seg);
    history_.push_back(PatternDistribution::from_region(seg, metrics_.pattern_size));
    end_state_ = *res.end_state;  // single-segment strip: already level coords
    current_latent_ = z;
    done_ = false;
    return current_latent_;
  }
  throw RuntimeFailure("no playable initial segment within " +
                       std::to_string(kResetCap) + " samples (degenerate backend)");
}

TileGrid DesignEnv::make_strip(const Segment& next, int* strip_offset_cols) const {
  const int committed = level_.segment_count();
  const int first_seg = std::max(0, committed - (kStripSegments - 1));
  *strip_offset_cols = first_seg * metrics_.window_cols;
  TileGrid strip = level_.grid().window(0, *strip_offset_cols, level_.rows(),
                                        level_.width() - *strip_offset_cols);
  strip.append_columns(next);
  return strip;
}

Candidate DesignEnv::propose(const Latent& action) const {
  if (done_) throw std::logic_error("propose() before reset()");
  if (!latent_in_bounds(action)) throw std::invalid_argument("action outside [-1,1]^32");

  Candidate cand;
  cand.action = action;
  cand.raw = backend_->generate(action);
  cand.repaired = repair(cand.raw, *alpha_);
  cand.faulty_before = static_cast<int>(detect_faulty_tiles(cand.raw, *alpha_).size());
  cand.faulty_after = static_cast<int>(detect_faulty_tiles(cand.repaired, *alpha_).size());
  cand.census = census(cand.repaired, *alpha_);

  int strip_offset = 0;
  const TileGrid strip = make_strip(cand.repaired, &strip_offset);

  AgentState start;
  bool have_start = false;
  if (end_state_) {
    start = *end_state_;
    start.col -= strip_offset;
    have_start = start.col >= 0;
  }
  if (!have_start) {
    // Chain broken (or never started): respawn at the first standable column.
    for (int c = 0; c < strip.cols() && !have_start; ++c) {
      try {
        start = spawn_state(strip, c, *alpha_);
        have_start = true;
      } catch (const RuntimeFailure&) {
      }
    }
  }
  if (have_start) {
    const PlayResult res = test_playability(strip, start, physics_, *alpha_);
    cand.playable = res.playable;
    cand.visited_states = res.visited_states;
    if (res.playable) {
      cand.end_state = *res.end_state;
      cand.end_state.col += strip_offset;
    }
  }

  // Metrics read the level as it would look with the candidate appended.
  Level trial = level_;
  trial.append(cand.repaired);
  cand.d = diversity(trial, level_.width(), metrics_);
  cand.f = fun(cand.d, metrics_);
  cand.h = historical_deviation(
      PatternDistribution::from_region(cand.repaired, metrics_.pattern_size), history_,
      metrics_);
  return cand;
}

void DesignEnv::commit(const Candidate& cand) {
  level_.append(cand.repaired);
  history_.push_back(PatternDistribution::from_region(cand.repaired, metrics_.pattern_size));
  while (static_cast<int>(history_.size()) > history_cap_) history_.pop_front();
  end_state_ = cand.end_state;
  current_latent_ = cand.action;
  ++segments_done_;
}

void DesignEnv::commit_unplayable(const Candidate& cand) {
  level_.append(cand.repaired);
  history_.push_back(PatternDistribution::from_region(cand.repaired, metrics_.pattern_size));
  while (static_cast<int>(history_.size()) > history_cap_) history_.pop_front();
  end_state_.reset();  // the next strip test restarts from a spawn point
  current_latent_ = cand.action;
  ++segments_done_;
}

DesignEnv::StepResult DesignEnv::step(const Latent& action) {
  if (done_) throw std::logic_error("step() after episode end");

  const Candidate cand = propose(action);
  StepResult out;
  out.info.playable = cand.playable;
  out.info.raw_d = cand.d;
  out.info.raw_f = cand.f;
  out.info.raw_h = cand.h;
  out.info.census = cand.census;

  if (!cand.playable) {
    done_ = true;
    out.done = true;
    out.reward = 0.0;
    out.next_state = current_latent_;
    return out;
  }

  commit(cand);
  std::map<RewardComponent, double> raw{{RewardComponent::F, cand.f},
                                        {RewardComponent::H, cand.h},
                                        {RewardComponent::P, 1.0}};
  out.reward = compose_reward(raw, normalizers_, reward_);
  out.next_state = current_latent_;
  if (segments_done_ >= max_segments_) {
    done_ = true;
    out.done = true;
    out.info.truncated = true;
  }
  return out;
}

}  // namespace lf
