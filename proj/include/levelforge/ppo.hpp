#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "levelforge/env.hpp"
#include "levelforge/policy.hpp"

namespace lf {

struct PpoConfig {
  double clip_ratio = 0.2;
  double discount = 0.99;
  double gae_lambda = 0.95;  // advantage-smoothing coefficient
  int rollout_steps = 2048;
  int minibatch_size = 64;
  int update_epochs = 4;
  double learning_rate = 3e-4;
  double entropy_coef = 0.01;
  double value_coef = 0.5;

  void validate() const;
};

struct TrainConfig {
  long total_steps = 100000;  // environment steps (the training budget)
  int max_segments = 100;     // N: episode cap
  PpoConfig ppo;
  std::uint64_t seed = 0;
  long checkpoint_every = 0;  // 0 = final checkpoint only
};

struct PpoSample {
  Eigen::VectorXd state;
  Eigen::VectorXd action;
  double log_prob_old = 0.0;
  double advantage = 0.0;
  double value_target = 0.0;
};

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
};

/// Clipped-surrogate PPO loss over a minibatch; parameter gradients are
/// accumulated into `grad` when non-null. Returns the scalar loss
/// (policy + value_coef * value - entropy_coef * entropy).
double ppo_loss(const GaussianActorCritic& nets, std::span<const PpoSample> batch,
                const PpoConfig& cfg, GaussianActorCritic* grad, UpdateStats* stats);

struct RolloutBuffer {
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> actions;
  std::vector<double> log_probs;
  std::vector<double> rewards;
  std::vector<double> values;
  std::vector<bool> dones;           // episode ended after this step
  std::vector<bool> truncateds;      // ended by the segment cap, not failure
  std::vector<double> bootstrap_values;  // value of the successor state where needed

  std::size_t size() const { return states.size(); }
  void clear();
};

/// Bootstrapped temporal-difference advantages with exponential smoothing
/// (lambda), plus value targets. Terminal steps bootstrap 0; truncated steps
/// bootstrap the stored successor value.
std::vector<PpoSample> compute_advantages(const RolloutBuffer& buffer, const PpoConfig& cfg);

/// One PPO update: advantage normalization, shuffled minibatches, several
/// epochs of Adam steps. Deterministic given the shuffle rng state.
UpdateStats ppo_update(GaussianActorCritic& nets, Adam& adam, const RolloutBuffer& buffer,
                       const PpoConfig& cfg, Rng& shuffle_rng);

/// Full training state: policy, optimizer, reward normalizers and rng streams.
struct Trainer {
  DesignerPolicy policy;
  Adam adam;
  std::map<RewardComponent, RunningNormalizer> normalizers;
  std::uint64_t master_seed = 0;
  long steps_done = 0;

  void save_checkpoint(const std::string& path, const Rng& env_rng, const Rng& action_rng,
                       const Rng& shuffle_rng) const;
};

struct Checkpoint {
  DesignerPolicy policy;
  Adam adam;
  std::map<RewardComponent, RunningNormalizer> normalizers;
  std::uint64_t master_seed = 0;
  long steps_done = 0;
  std::string env_rng_state, action_rng_state, shuffle_rng_state;

  static Checkpoint load(const std::string& path);
};

/// Train a designer on `backend` with the given reward. Writes one CSV row per
/// PPO update to `log` when non-null (step, mean return, component means, clip
/// fraction). Fully reproducible from the seed, single-threaded.
Trainer train(const TrainConfig& cfg, const RewardConfig& reward,
              const MetricConfig& metrics, const PhysicsParams& physics,
              const GeneratorBackend& backend, std::ostream* log = nullptr,
              const std::string& checkpoint_path = "",
              const TileAlphabet& alpha = TileAlphabet::smb());

}  // namespace lf
